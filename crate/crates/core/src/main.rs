fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(titanic_dm::cli::run(&argv));
}
