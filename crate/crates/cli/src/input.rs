//! Command arguments that carry JSON, either inline or as a file path.

use std::fs;

use lensbordant::{Changemaker, E8Vector, VSequence};
use serde_json::Value;

use crate::CliError;

/// Parses `arg` as JSON when it looks like JSON, otherwise reads it as a file.
pub fn read_json(arg: &str) -> Result<Value, CliError> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with(['[', '{', '"']) || trimmed.parse::<f64>().is_ok() {
        arg.to_string()
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad JSON in {arg}: {e}")))
}

/// Pulls `key` out of an object, or returns the value itself.
fn field<'a>(value: &'a Value, key: &str) -> &'a Value {
    match value {
        Value::Object(map) => map.get(key).unwrap_or(value),
        _ => value,
    }
}

fn u64_list(value: &Value, what: &str) -> Result<Vec<u64>, CliError> {
    serde_json::from_value(value.clone()).map_err(|e| {
        CliError::Usage(format!(
            "{what} must be a list of non-negative integers: {e}"
        ))
    })
}

/// A list of entries: `[3,1]` or `{"sigma":[3,1]}`, with no validation.
pub fn entries(arg: &str) -> Result<Vec<u64>, CliError> {
    let value = read_json(arg)?;
    u64_list(field(&value, "sigma"), "sigma")
}

pub fn changemaker(arg: &str) -> Result<Changemaker, CliError> {
    Ok(Changemaker::new(entries(arg)?)?)
}

/// A V-sequence: `[2,1,1,0]` or any object with a `"v"` key.
pub fn v_sequence(arg: &str) -> Result<VSequence, CliError> {
    let value = read_json(arg)?;
    Ok(VSequence::new(u64_list(field(&value, "v"), "v")?)?)
}

/// An E8 vector: eight coordinates as numbers or `"a/2"` strings, or an
/// object with an `"s"` key.
pub fn e8_vector(arg: &str) -> Result<E8Vector, CliError> {
    let value = read_json(arg)?;
    serde_json::from_value(field(&value, "s").clone())
        .map_err(|e| CliError::Usage(format!("bad E8 vector: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_and_wrapped_forms() {
        assert_eq!(entries("[3,1]").unwrap(), vec![3, 1]);
        assert_eq!(entries(r#"{"sigma":[2,1]}"#).unwrap(), vec![2, 1]);
        assert_eq!(
            v_sequence(r#"{"v":[1,0],"nu_plus":1}"#).unwrap().nu_plus(),
            1
        );
        assert!(matches!(entries("[-1]"), Err(CliError::Usage(_))));
        assert!(matches!(
            entries("/no/such/file.json"),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn file_input() {
        let path =
            std::env::temp_dir().join(format!("lensbordant-input-{}.json", std::process::id()));
        fs::write(&path, r#"{"sigma":[2,1,1,1]}"#).unwrap();
        assert_eq!(changemaker(path.to_str().unwrap()).unwrap().p(), 7);
        fs::remove_file(path).unwrap();
    }
}
