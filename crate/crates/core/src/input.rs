//! Parser for the quiver description format shared by the library and the
//! CLI.
//!
//! A description is line-oriented; `#` starts a comment and blank lines are
//! ignored. Four fields are required, each on one line:
//!
//! ```text
//! vertices: i j
//! arrows: a: i -> j, b: i -> j, c: i -> j
//! theta: i = 3, j = -2
//! d: i = 2, j = 3
//! ```
//!
//! Identifiers are nonempty ASCII alphanumeric/underscore strings. `theta`
//! assigns an integer to every vertex, `d` a nonnegative integer.

use thiserror::Error;

use crate::quiver::{DimVector, Quiver, QuiverError, Stability};

#[derive(Debug, Error)]
pub enum InputError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing field `{0}`")]
    MissingField(&'static str),
    #[error("duplicate field `{0}`")]
    DuplicateField(String),
    #[error("unknown vertex `{0}` in assignment")]
    UnknownVertex(String),
    #[error("vertex `{0}` missing from assignment")]
    Unassigned(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// A parsed problem instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub quiver: Quiver,
    pub theta: Stability,
    pub d: DimVector,
}

pub fn parse_instance(text: &str) -> Result<Instance, InputError> {
    let mut vertices: Option<(usize, String)> = None;
    let mut arrows: Option<(usize, String)> = None;
    let mut theta: Option<(usize, String)> = None;
    let mut d: Option<(usize, String)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| InputError::Syntax {
            line: line_no,
            msg: "expected `field: value`".into(),
        })?;
        let slot = match key.trim() {
            "vertices" => &mut vertices,
            "arrows" => &mut arrows,
            "theta" => &mut theta,
            "d" => &mut d,
            other => {
                return Err(InputError::Syntax {
                    line: line_no,
                    msg: format!("unknown field `{other}`"),
                })
            }
        };
        if slot.is_some() {
            return Err(InputError::DuplicateField(key.trim().to_string()));
        }
        *slot = Some((line_no, rest.trim().to_string()));
    }

    let (v_line, v_text) = vertices.ok_or(InputError::MissingField("vertices"))?;
    let vertex_ids = parse_idents(&v_text, v_line)?;

    let (a_line, a_text) = arrows.ok_or(InputError::MissingField("arrows"))?;
    let arrow_decls = parse_arrows(&a_text, a_line)?;

    let quiver = Quiver::new(vertex_ids, arrow_decls)?;

    let (t_line, t_text) = theta.ok_or(InputError::MissingField("theta"))?;
    let theta = Stability(parse_assignment(&t_text, t_line, &quiver, false)?);

    let (d_line, d_text) = d.ok_or(InputError::MissingField("d"))?;
    let d_vals = parse_assignment(&d_text, d_line, &quiver, true)?;
    let d = DimVector(d_vals.iter().map(|&x| x as u32).collect());

    Ok(Instance { quiver, theta, d })
}

fn valid_ident(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

fn parse_idents(text: &str, line: usize) -> Result<Vec<String>, InputError> {
    let ids: Vec<String> = text.split_whitespace().map(|s| s.to_string()).collect();
    if ids.is_empty() {
        return Err(InputError::Syntax {
            line,
            msg: "expected at least one vertex id".into(),
        });
    }
    for id in &ids {
        if !valid_ident(id) {
            return Err(InputError::Syntax {
                line,
                msg: format!("invalid identifier `{id}`"),
            });
        }
    }
    Ok(ids)
}

fn parse_arrows(text: &str, line: usize) -> Result<Vec<(String, String, String)>, InputError> {
    if text.trim().is_empty() || text.trim() == "none" {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|chunk| {
            let chunk = chunk.trim();
            let (id, ends) = chunk.split_once(':').ok_or_else(|| InputError::Syntax {
                line,
                msg: format!("expected `id: src -> tgt` in `{chunk}`"),
            })?;
            let (src, tgt) = ends.split_once("->").ok_or_else(|| InputError::Syntax {
                line,
                msg: format!("expected `src -> tgt` in `{chunk}`"),
            })?;
            let (id, src, tgt) = (id.trim(), src.trim(), tgt.trim());
            for part in [id, src, tgt] {
                if !valid_ident(part) {
                    return Err(InputError::Syntax {
                        line,
                        msg: format!("invalid identifier `{part}`"),
                    });
                }
            }
            Ok((id.to_string(), src.to_string(), tgt.to_string()))
        })
        .collect()
}

fn parse_assignment(
    text: &str,
    line: usize,
    quiver: &Quiver,
    nonnegative: bool,
) -> Result<Vec<i64>, InputError> {
    let mut values: Vec<Option<i64>> = vec![None; quiver.num_vertices()];
    for chunk in text.split(',') {
        let chunk = chunk.trim();
        let (name, value) = chunk.split_once('=').ok_or_else(|| InputError::Syntax {
            line,
            msg: format!("expected `vertex = value` in `{chunk}`"),
        })?;
        let name = name.trim();
        let idx = quiver
            .vertex_index(name)
            .ok_or_else(|| InputError::UnknownVertex(name.to_string()))?;
        let value: i64 = value.trim().parse().map_err(|_| InputError::Syntax {
            line,
            msg: format!("invalid integer `{}`", value.trim()),
        })?;
        if nonnegative && value < 0 {
            return Err(InputError::Syntax {
                line,
                msg: format!("`d` entries must be nonnegative, got {value}"),
            });
        }
        values[idx] = Some(value);
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| InputError::Unassigned(quiver.vertex_name(i).to_string())))
        .collect()
}
