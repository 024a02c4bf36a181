//! Built-in manifold definitions: the 3-dimensional z-frame example in two
//! phi-variants plus designed-negative fixtures for error paths.
//!
//! Each builtin is embedded as a definition file (golden copies live under
//! `fixtures/`) so fixtures and the CLI parser can never drift apart.

use crate::cli::{parse_definition, DefinitionFile};
use thiserror::Error;

/// Every builtin id, in documentation order.
pub const BUILTIN_IDS: [&str; 4] = [
    "lcs3-paper-phi",
    "lcs3-corrected-phi",
    "lcs3-flat-negative",
    "lcs3-degenerate-frame",
];

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`")]
    Unknown(String),
}

/// A builtin manifold definition, equivalent to its definition file.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub id: &'static str,
    pub def: DefinitionFile,
}

/// Raw definition-file text of a builtin.
pub fn builtin_text(id: &str) -> Option<&'static str> {
    match id {
        "lcs3-paper-phi" => Some(include_str!("../fixtures/lcs3-paper-phi.lcs")),
        "lcs3-corrected-phi" => Some(include_str!("../fixtures/lcs3-corrected-phi.lcs")),
        "lcs3-flat-negative" => Some(include_str!("../fixtures/lcs3-flat-negative.lcs")),
        "lcs3-degenerate-frame" => Some(include_str!("../fixtures/lcs3-degenerate-frame.lcs")),
        _ => None,
    }
}

/// Load a builtin by id. Construction errors (e.g. the degenerate frame)
/// surface later, when the definition is built into a model.
pub fn load_builtin(id: &str) -> Result<Fixture, FixtureError> {
    let text = builtin_text(id).ok_or_else(|| FixtureError::Unknown(id.to_string()))?;
    let def = parse_definition(text).expect("builtin fixture text is well-formed");
    let id = BUILTIN_IDS
        .iter()
        .find(|&&b| b == id)
        .expect("id matched builtin_text");
    Ok(Fixture { id, def })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_id_rejected() {
        assert!(matches!(
            load_builtin("lcs3-nope"),
            Err(FixtureError::Unknown(_))
        ));
    }

    #[test]
    fn builtin_text_round_trips_byte_identically() {
        for id in BUILTIN_IDS {
            let text = builtin_text(id).unwrap();
            let fx = load_builtin(id).unwrap();
            assert_eq!(fx.def.to_text(), text, "serializer drift for {id}");
        }
    }

    #[test]
    fn phi_variants_differ_only_in_phi() {
        let paper = load_builtin("lcs3-paper-phi").unwrap().def;
        let corrected = load_builtin("lcs3-corrected-phi").unwrap().def;
        assert_eq!(paper.frame, corrected.frame);
        assert_eq!(paper.metric_upper, corrected.metric_upper);
        assert_eq!(paper.xi, corrected.xi);
        assert_eq!(paper.alpha, corrected.alpha);
        assert_eq!(paper.rho, corrected.rho);
        assert_ne!(paper.phi_cols, corrected.phi_cols);
    }

    #[test]
    fn degenerate_frame_fails_at_build() {
        let fx = load_builtin("lcs3-degenerate-frame").unwrap();
        assert!(fx.def.build().is_err());
    }
}
