//! JSON space files.
//!
//! ```json
//! {"trunc": 2, "levels": [1, 2, 3],
//!  "faces": [[], [[0, 0], [0, 0]], [[0, 0, 1], [0, 1, 1], [0, 1, 1]]],
//!  "degeneracies": [[[0]], [[0, 2], [0, 1]]],
//!  "basepoint": 0}
//! ```
//!
//! `faces[k][i]` lists `d_i` of every level-`k` simplex (`faces[0]` is empty),
//! `degeneracies[k][j]` lists `s_j` of every level-`k` simplex for `k < trunc`.
//! All indices are 0-based; `labels` is optional.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{validate, BasedSimplicialSet, SimplicialSet};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpaceFile {
    pub trunc: usize,
    pub levels: Vec<usize>,
    pub faces: Vec<Vec<Vec<u32>>>,
    pub degeneracies: Vec<Vec<Vec<u32>>>,
    pub basepoint: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<String>>>,
}

impl SpaceFile {
    pub fn from_space(x: &BasedSimplicialSet) -> Self {
        let space = &x.space;
        let trunc = space.trunc();
        Self {
            trunc,
            levels: space.sizes().to_vec(),
            faces: (0..=trunc)
                .map(|k| {
                    if k == 0 {
                        Vec::new()
                    } else {
                        (0..=k).map(|i| space.face_table(k, i).to_vec()).collect()
                    }
                })
                .collect(),
            degeneracies: (0..trunc)
                .map(|k| {
                    (0..=k)
                        .map(|j| space.degeneracy_table(k, j).to_vec())
                        .collect()
                })
                .collect(),
            basepoint: x.basepoint,
            labels: space.labels().cloned(),
        }
    }

    pub fn into_space(self) -> Result<BasedSimplicialSet> {
        let parse = |location: &str, message: String| Error::Parse {
            location: location.to_string(),
            message,
        };
        if self.levels.is_empty() {
            return Err(parse("levels", "levels array must not be empty".into()));
        }
        if self.levels.len() != self.trunc + 1 {
            return Err(parse(
                "trunc",
                format!(
                    "trunc {} needs {} level sizes, found {}",
                    self.trunc,
                    self.trunc + 1,
                    self.levels.len()
                ),
            ));
        }
        if let Some(k) = self.levels.iter().position(|&s| s == 0) {
            return Err(parse(
                &format!("levels[{k}]"),
                "level tables must be non-empty".into(),
            ));
        }
        let space =
            SimplicialSet::from_tables(self.levels, self.faces, self.degeneracies, self.labels)
                .map_err(|e| match e {
                    Error::InvalidInput(msg) => parse("tables", msg),
                    other => other,
                })?;
        validate(&space).into_result()?;
        if self.basepoint >= space.level_size(0) {
            return Err(parse(
                "basepoint",
                format!("vertex {} does not exist", self.basepoint),
            ));
        }
        Ok(BasedSimplicialSet {
            space: Arc::new(space),
            basepoint: self.basepoint,
        })
    }
}

pub fn space_to_json(x: &BasedSimplicialSet) -> String {
    serde_json::to_string(&SpaceFile::from_space(x)).expect("space tables serialize")
}

/// Parses and validates a space file's contents.
pub fn parse_space(text: &str) -> Result<BasedSimplicialSet> {
    let file: SpaceFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {} column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    file.into_space()
}

pub fn load_space(path: impl AsRef<Path>) -> Result<BasedSimplicialSet> {
    parse_space(&std::fs::read_to_string(path)?)
}

pub fn save_space(x: &BasedSimplicialSet, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, space_to_json(x))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::sphere_model;

    #[test]
    fn round_trip_preserves_tables() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("circle.json");
        let circle = sphere_model(1, 2);
        save_space(&circle, &path).unwrap();
        let back = load_space(&path).unwrap();
        assert_eq!(back.space.sizes(), &[1, 2, 3]);
        assert_eq!(back, circle);
    }

    #[test]
    fn identity_violation_is_a_validation_error() {
        let circle = sphere_model(1, 2);
        let mut file = SpaceFile::from_space(&circle);
        // make d_0 d_1 differ from d_0 d_0 on a level-2 simplex
        file.levels[0] = 2;
        file.degeneracies[0][0] = vec![0, 0];
        file.faces[1] = vec![vec![0, 0], vec![0, 1]];
        file.labels = None;
        let text = serde_json::to_string(&file).unwrap();
        match parse_space(&text) {
            Err(Error::Validation { count, .. }) => assert!(count >= 1),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn empty_levels_is_a_parse_error() {
        let text = r#"{"trunc": 0, "levels": [], "faces": [], "degeneracies": [], "basepoint": 0}"#;
        assert!(matches!(parse_space(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn syntax_errors_report_line_and_column() {
        let err = parse_space("{\n  \"trunc\": 1,\n  oops\n}").unwrap_err();
        match err {
            Error::Parse { location, .. } => assert!(location.starts_with("line 3")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
