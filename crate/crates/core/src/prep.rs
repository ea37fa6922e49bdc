//! Converts the raw Kaggle Titanic passenger table into the all-nominal
//! analysis dataset (Survived, Class, Sex, AgeGroup, Embarked).

use crate::csv::RawTable;
use crate::dataset::{remove_attributes, AttributeSpec, CellValue, Dataset};
use crate::error::{Error, Result};

/// Age buckets, their upper bounds (exclusive) and the missing-age label.
pub const AGE_GROUPS: [&str; 5] = ["Child", "Adolescent", "Adult", "Old", "Unk"];
const AGE_BREAKS: [f64; 3] = [10.0, 20.0, 50.0];

pub const EMBARKED: [&str; 4] = ["Southampton", "Cherbourg", "Queenstown", "Unk"];
const EMBARK_CODES: [&str; 3] = ["S", "C", "Q"];

pub const CLASSES: [&str; 3] = ["1st", "2nd", "3rd"];
pub const SURVIVED: [&str; 2] = ["No", "Yes"];
pub const SEXES: [&str; 2] = ["male", "female"];

/// Columns dropped from the nine-column table: PassengerId, Pclass, Age, Ecode.
pub const DROPPED_COLUMNS: &str = "1,3,6,8";

pub fn age_group(age: Option<f64>) -> Result<&'static str> {
    let Some(age) = age else { return Ok("Unk") };
    if age.is_nan() || age < 0.0 {
        return Err(Error::data(format!("invalid age {age}")));
    }
    let bucket = AGE_BREAKS.iter().position(|&b| age < b).unwrap_or(AGE_BREAKS.len());
    Ok(AGE_GROUPS[bucket])
}

pub fn embarked_name(code: Option<&str>) -> Result<&'static str> {
    match code {
        None => Ok("Unk"),
        Some(c) => EMBARK_CODES
            .iter()
            .position(|&k| k == c)
            .map(|i| EMBARKED[i])
            .ok_or_else(|| Error::data(format!("unknown embarkation code '{c}'"))),
    }
}

fn blank_to_none(s: &str) -> Option<&str> {
    let s = s.trim();
    (!s.is_empty()).then_some(s)
}

fn nominal(name: &str, values: &[&str]) -> AttributeSpec {
    AttributeSpec::nominal(name, values.iter().copied()).expect("static value list")
}

/// The nine-column intermediate table with passenger ids, numeric class and age
/// and raw embarkation codes still present.
pub fn normalize_intermediate(raw: &RawTable, relation: &str) -> Result<Dataset> {
    let col =
        |name: &str| raw.column(name).ok_or_else(|| Error::data(format!("input is missing required column '{name}'")));
    let (id_c, surv_c, pclass_c, sex_c, age_c, emb_c) =
        (col("PassengerId")?, col("Survived")?, col("Pclass")?, col("Sex")?, col("Age")?, col("Embarked")?);

    let attrs = vec![
        AttributeSpec::numeric("PassengerId"),
        nominal("Survived", &SURVIVED),
        AttributeSpec::numeric("Pclass"),
        nominal("Class", &CLASSES),
        nominal("Sex", &SEXES),
        AttributeSpec::numeric("Age"),
        nominal("AgeGroup", &AGE_GROUPS),
        nominal("Ecode", &["S", "C", "Q", "Unk"]),
        nominal("Embarked", &EMBARKED),
    ];
    let mut d = Dataset::new(relation, attrs);

    for (i, row) in raw.rows.iter().enumerate() {
        // header is line 1
        let line = i + 2;
        let at = |msg: String| Error::data_at(line, format!("row {line}: {msg}"));

        let id = row[id_c].trim().parse::<f64>().map_err(|_| at(format!("bad PassengerId '{}'", row[id_c])))?;
        let survived = match row[surv_c].trim() {
            "0" => 0,
            "1" => 1,
            other => return Err(at(format!("unmappable Survived value '{other}'"))),
        };
        let pclass = match row[pclass_c].trim() {
            "1" => 0,
            "2" => 1,
            "3" => 2,
            other => return Err(at(format!("unmappable Pclass value '{other}'"))),
        };
        let sex = SEXES
            .iter()
            .position(|&s| s == row[sex_c].trim())
            .ok_or_else(|| at(format!("unmappable Sex value '{}'", row[sex_c])))?;
        let age = blank_to_none(&row[age_c])
            .map(|a| a.parse::<f64>().map_err(|_| at(format!("bad Age '{a}'"))))
            .transpose()?;
        let group = age_group(age).map_err(|e| at(e.to_string()))?;
        let code = blank_to_none(&row[emb_c]);
        let port = embarked_name(code).map_err(|e| at(e.to_string()))?;
        let ecode = EMBARK_CODES.iter().position(|&k| Some(k) == code).unwrap_or(3);

        d.push(vec![
            CellValue::Numeric(id),
            CellValue::Nominal(survived),
            CellValue::Numeric((pclass + 1) as f64),
            CellValue::Nominal(pclass),
            CellValue::Nominal(sex),
            age.map_or(CellValue::Missing, CellValue::Numeric),
            CellValue::Nominal(AGE_GROUPS.iter().position(|&g| g == group).expect("known group")),
            CellValue::Nominal(ecode),
            CellValue::Nominal(EMBARKED.iter().position(|&p| p == port).expect("known port")),
        ])?;
    }
    Ok(d)
}

/// Full normalization: nine-column table, then removal of columns 1,3,6,8.
/// The result has `Survived` as its target.
pub fn normalize_titanic(raw: &RawTable, relation: &str) -> Result<Dataset> {
    let wide = normalize_intermediate(raw, relation)?;
    let mut d = remove_attributes(&wide, DROPPED_COLUMNS)?;
    d.set_target(Some(0))?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csv::parse_csv;

    #[test]
    fn age_buckets() {
        assert_eq!(age_group(Some(22.0)).unwrap(), "Adult");
        assert_eq!(age_group(None).unwrap(), "Unk");
        assert_eq!(age_group(Some(54.0)).unwrap(), "Old");
        assert_eq!(age_group(Some(0.42)).unwrap(), "Child");
        assert_eq!(age_group(Some(0.0)).unwrap(), "Child");
        // boundaries land in the higher bucket
        assert_eq!(age_group(Some(10.0)).unwrap(), "Adolescent");
        assert_eq!(age_group(Some(20.0)).unwrap(), "Adult");
        assert_eq!(age_group(Some(50.0)).unwrap(), "Old");
        assert_eq!(age_group(Some(49.99)).unwrap(), "Adult");
        assert!(age_group(Some(-1.0)).is_err());
        assert!(age_group(Some(f64::NAN)).is_err());
    }

    #[test]
    fn ports() {
        assert_eq!(embarked_name(Some("C")).unwrap(), "Cherbourg");
        assert_eq!(embarked_name(Some("Q")).unwrap(), "Queenstown");
        assert_eq!(embarked_name(Some("S")).unwrap(), "Southampton");
        assert_eq!(embarked_name(None).unwrap(), "Unk");
        assert!(embarked_name(Some("X")).is_err());
    }

    const HEAD: &str = "PassengerId,Survived,Pclass,Name,Sex,Age,SibSp,Parch,Ticket,Fare,Cabin,Embarked\n";

    #[test]
    fn first_rows() {
        let raw = parse_csv(&format!(
            "{HEAD}1,0,3,\"Braund, Mr. Owen Harris\",male,22,1,0,A/5 21171,7.25,,S\n\
             2,1,1,\"Cumings, Mrs. John Bradley (Florence Briggs Thayer)\",female,38,1,0,PC 17599,71.2833,C85,C\n"
        ))
        .unwrap();
        let d = normalize_titanic(&raw, "train4").unwrap();
        assert_eq!(d.target(), Some(0));
        let names: Vec<Vec<&str>> = d
            .instances()
            .iter()
            .map(|r| {
                r.iter().zip(d.attributes()).map(|(c, a)| a.values().unwrap()[c.nominal().unwrap()].as_str()).collect()
            })
            .collect();
        assert_eq!(names[0], ["No", "3rd", "male", "Adult", "Southampton"]);
        assert_eq!(names[1], ["Yes", "1st", "female", "Adult", "Cherbourg"]);
    }

    #[test]
    fn missing_column_is_data_error() {
        let raw = parse_csv("PassengerId,Survived\n1,0\n").unwrap();
        let err = normalize_titanic(&raw, "t").unwrap_err();
        assert!(err.to_string().contains("Pclass"));
    }

    #[test]
    fn bad_survived_names_row() {
        let raw =
            parse_csv(&format!("{HEAD}1,0,3,x,male,22,1,0,t,7.25,,S\n2,maybe,3,x,male,22,1,0,t,7.25,,S\n")).unwrap();
        let err = normalize_titanic(&raw, "t").unwrap_err();
        assert!(err.to_string().contains("row 3"), "{err}");
        assert!(err.to_string().contains("maybe"));
    }

    #[test]
    fn blanks_become_unk_not_missing() {
        let raw = parse_csv(&format!("{HEAD}6,0,3,\"Moran, Mr. James\",male,,0,0,330877,8.4583,,\n")).unwrap();
        let d = normalize_titanic(&raw, "t").unwrap();
        assert!(d.instances()[0].iter().all(|c| !c.is_missing()));
        assert_eq!(d.instances()[0][3], CellValue::Nominal(4));
        assert_eq!(d.instances()[0][4], CellValue::Nominal(3));
    }
}
