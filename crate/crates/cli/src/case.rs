//! Case files: a digraph or an arrangement as JSON, with an optional
//! description. The two payload schemas are distinguished by their key
//! (`edges` vs `hyperplanes`); exactly one must be present.

use arrlab::{Arrangement, MultiDigraph};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseKind {
    Digraph,
    Arrangement,
}

impl std::fmt::Display for CaseKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseKind::Digraph => write!(f, "digraph"),
            CaseKind::Arrangement => write!(f, "arrangement"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum CasePayload {
    Digraph(MultiDigraph),
    Arrangement(Arrangement),
}

#[derive(Debug, Clone)]
pub struct CaseFile {
    pub payload: CasePayload,
    pub description: Option<String>,
}

impl CaseFile {
    pub fn kind(&self) -> CaseKind {
        match self.payload {
            CasePayload::Digraph(_) => CaseKind::Digraph,
            CasePayload::Arrangement(_) => CaseKind::Arrangement,
        }
    }

    pub fn digraph(&self) -> Result<&MultiDigraph, CliError> {
        match &self.payload {
            CasePayload::Digraph(g) => Ok(g),
            CasePayload::Arrangement(_) => Err(CliError::Input(
                "this command needs a digraph case, got an arrangement".into(),
            )),
        }
    }

    /// The case as an arrangement-shaped JSON-serializable value.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Wrapper<'a, T: Serialize> {
            #[serde(flatten)]
            payload: &'a T,
            #[serde(skip_serializing_if = "Option::is_none")]
            description: &'a Option<String>,
        }
        match &self.payload {
            CasePayload::Digraph(g) => serde_json::to_value(Wrapper {
                payload: g,
                description: &self.description,
            }),
            CasePayload::Arrangement(a) => serde_json::to_value(Wrapper {
                payload: a,
                description: &self.description,
            }),
        }
        .expect("case serialization is infallible")
    }
}

/// Parses and validates a case from JSON text. Diagnostics carry the line
/// and column for malformed JSON and the offending field for schema errors.
pub fn parse_case(text: &str) -> Result<CaseFile, CliError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::Input(format!("malformed JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::Input("case must be a JSON object".into()))?;

    let description = match obj.get("description") {
        None => None,
        Some(serde_json::Value::String(s)) => Some(s.clone()),
        Some(_) => {
            return Err(CliError::Input("description must be a string".into()));
        }
    };

    let mut payload = obj.clone();
    payload.remove("description");
    let payload = serde_json::Value::Object(payload);

    match (obj.contains_key("edges"), obj.contains_key("hyperplanes")) {
        (true, true) => Err(CliError::Input(
            "case mixes the digraph and arrangement schemas (both `edges` and `hyperplanes`)"
                .into(),
        )),
        (false, false) => Err(CliError::Input(
            "case matches neither schema: expected `edges` (digraph) or `hyperplanes` (arrangement)"
                .into(),
        )),
        (true, false) => {
            let g: MultiDigraph = serde_json::from_value(payload)
                .map_err(|e| CliError::Input(format!("invalid digraph case: {e}")))?;
            Ok(CaseFile {
                payload: CasePayload::Digraph(g),
                description,
            })
        }
        (false, true) => {
            let a: Arrangement = serde_json::from_value(payload)
                .map_err(|e| CliError::Input(format!("invalid arrangement case: {e}")))?;
            Ok(CaseFile {
                payload: CasePayload::Arrangement(a),
                description,
            })
        }
    }
}

/// Reads a case from a path, with `-` standing for stdin.
pub fn read_case(path: &std::path::Path) -> Result<CaseFile, CliError> {
    let text = if path.as_os_str() == "-" {
        use std::io::Read;
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Input(format!("reading stdin: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("reading {}: {e}", path.display())))?
    };
    parse_case(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_figure_one_digraph() {
        let case = parse_case(r#"{"n":3,"edges":[[1,2],[1,3],[2,3]]}"#).unwrap();
        assert_eq!(case.kind(), CaseKind::Digraph);
        assert_eq!(case.digraph().unwrap().edge_count(), 3);
        assert!(case.description.is_none());
    }

    #[test]
    fn parses_edgeless_digraph() {
        let case = parse_case(r#"{"n":2,"edges":[]}"#).unwrap();
        assert_eq!(case.kind(), CaseKind::Digraph);
    }

    #[test]
    fn rejects_nonpositive_constant() {
        let err = parse_case(r#"{"n":3,"hyperplanes":[{"i":1,"j":2,"a":"-1"}]}"#).unwrap_err();
        assert!(
            err.to_string().contains("must be positive"),
            "got: {err}"
        );
    }

    #[test]
    fn rejects_malformed_and_ambiguous_cases() {
        let err = parse_case("{not json").unwrap_err();
        assert!(err.to_string().contains("malformed JSON"), "got: {err}");

        let err = parse_case(r#"{"n":2}"#).unwrap_err();
        assert!(err.to_string().contains("neither schema"), "got: {err}");

        let err =
            parse_case(r#"{"n":2,"edges":[],"hyperplanes":[]}"#).unwrap_err();
        assert!(err.to_string().contains("mixes"), "got: {err}");

        let err = parse_case(r#"{"n":2,"edges":[[1,5]]}"#).unwrap_err();
        assert!(err.to_string().contains("out of range"), "got: {err}");

        let err = parse_case(
            r#"{"n":2,"hyperplanes":[{"i":1,"j":2,"a":"1"},{"i":1,"j":2,"a":"1"}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("duplicate hyperplane"), "got: {err}");
    }

    #[test]
    fn round_trips_cases_with_descriptions() {
        for text in [
            r#"{"n":3,"edges":[[1,2],[1,3],[2,3]]}"#,
            r#"{"n":3,"edges":[[1,2],[2,1]],"mult":[2,1],"description":"mixed pair"}"#,
            r#"{"n":3,"hyperplanes":[{"i":1,"j":2,"a":"1"},{"i":2,"j":3,"a":"5/2"}],"description":"crossing"}"#,
        ] {
            let case = parse_case(text).unwrap();
            let rendered = serde_json::to_string(&case.to_json()).unwrap();
            let reparsed = parse_case(&rendered).unwrap();
            assert_eq!(
                serde_json::to_string(&reparsed.to_json()).unwrap(),
                rendered
            );
            assert_eq!(reparsed.description, case.description);
        }
    }
}
