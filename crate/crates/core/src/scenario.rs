//! JSON scenario files: a probability space, conditioning blocks, a cone,
//! named positions and named built-in risk measures.
//!
//! ```json
//! {
//!   "atoms": [{"id": "up", "prob": 0.5}, {"id": "down", "prob": 0.5}],
//!   "f_blocks": [["up", "down"]],
//!   "d": 1,
//!   "cone": {"inequalities": [[1.0]]},
//!   "positions": {"X1": [[0.0], [1.0]]},
//!   "risks": {"entropic": {"kind": "entropic", "gamma": 1.0}}
//! }
//! ```
//!
//! Risk parameters (`gamma`, `lambda`) are a number or one number per block.
//! `cone` is optional and defaults to the nonnegative orthant.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::lpmod::{Cone, Position};
use crate::prob::{ProbSpace, SubAlgebra};
use crate::randvar::RandVar;
use crate::risk::RiskMeasure;

#[derive(Clone, Debug)]
pub struct Scenario {
    pub space: ProbSpace,
    pub f: SubAlgebra,
    pub d: usize,
    pub cone: Cone,
    pub positions: BTreeMap<String, Position>,
    pub risks: BTreeMap<String, RiskMeasure>,
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// JSON pointer escaping for object keys.
fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

fn field<'a>(obj: &'a Value, key: &str, at: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(format!("{at}/{}", escape(key)), "missing field"))
}

fn number(v: &Value, at: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| schema(at, "expected a number"))
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(at, "expected an array"))
}

fn object<'a>(v: &'a Value, at: &str) -> Result<&'a serde_json::Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(at, "expected an object"))
}

/// Re-labels a module error with the pointer of the input that caused it.
fn at(pointer: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        e @ Error::Schema { .. } => e,
        other => schema(pointer, other.to_string()),
    }
}

fn matrix(v: &Value, pointer: &str) -> Result<Vec<Vec<f64>>> {
    array(v, pointer)?
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let row_at = format!("{pointer}/{r}");
            array(row, &row_at)?
                .iter()
                .enumerate()
                .map(|(c, x)| number(x, &format!("{row_at}/{c}")))
                .collect()
        })
        .collect()
}

impl Scenario {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|_| Error::FileNotFound(path.display().to_string()))?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let root: Value = serde_json::from_str(text).map_err(|e| schema("", format!("invalid JSON: {e}")))?;
        Self::from_value(&root)
    }

    pub fn from_value(root: &Value) -> Result<Self> {
        object(root, "")?;

        let atoms = array(field(root, "atoms", "")?, "/atoms")?;
        let mut entries = Vec::with_capacity(atoms.len());
        for (k, atom) in atoms.iter().enumerate() {
            let here = format!("/atoms/{k}");
            let id = field(atom, "id", &here)?
                .as_str()
                .ok_or_else(|| schema(format!("{here}/id"), "expected a string"))?;
            let prob = number(field(atom, "prob", &here)?, &format!("{here}/prob"))?;
            entries.push((id.to_string(), prob));
        }
        let space = ProbSpace::new(entries).map_err(at("/atoms"))?;

        let blocks_value = array(field(root, "f_blocks", "")?, "/f_blocks")?;
        let mut blocks = Vec::with_capacity(blocks_value.len());
        for (b, block) in blocks_value.iter().enumerate() {
            let here = format!("/f_blocks/{b}");
            let labels = array(block, &here)?
                .iter()
                .enumerate()
                .map(|(k, l)| {
                    l.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| schema(format!("{here}/{k}"), "expected an atom id"))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(labels);
        }
        let f = SubAlgebra::from_labels(&space, &blocks).map_err(at("/f_blocks"))?;

        let d = field(root, "d", "")?
            .as_u64()
            .filter(|&d| d >= 1)
            .ok_or_else(|| schema("/d", "expected a positive integer"))? as usize;

        let cone = match root.get("cone") {
            None => Cone::orthant(d),
            Some(c) => {
                let rows = matrix(field(c, "inequalities", "/cone")?, "/cone/inequalities")?;
                Cone::new(d, rows).map_err(at("/cone/inequalities"))?
            }
        };

        let mut positions = BTreeMap::new();
        if let Some(p) = root.get("positions") {
            for (name, rows) in object(p, "/positions")? {
                let here = format!("/positions/{}", escape(name));
                let rows = matrix(rows, &here)?;
                let x = Position::new(&space, rows).map_err(at(&here))?;
                if x.dim() != d {
                    return Err(schema(here, format!("rows have {} coordinates, scenario has d = {d}", x.dim())));
                }
                positions.insert(name.clone(), x);
            }
        }

        let mut risks = BTreeMap::new();
        if let Some(r) = root.get("risks") {
            for (name, spec) in object(r, "/risks")? {
                let here = format!("/risks/{}", escape(name));
                let rho = Self::risk_from(spec, &here, &f, &cone)?;
                risks.insert(name.clone(), rho);
            }
        }

        Ok(Self {
            space,
            f,
            d,
            cone,
            positions,
            risks,
        })
    }

    fn block_param(spec: &Value, key: &str, here: &str, f: &SubAlgebra) -> Result<RandVar> {
        let pointer = format!("{here}/{key}");
        let v = field(spec, key, here)?;
        let per_block = match v {
            Value::Array(items) => {
                if items.len() != f.num_blocks() {
                    return Err(schema(
                        pointer,
                        format!("expected {} values, one per block", f.num_blocks()),
                    ));
                }
                items
                    .iter()
                    .enumerate()
                    .map(|(b, x)| number(x, &format!("{pointer}/{b}")))
                    .collect::<Result<Vec<_>>>()?
            }
            other => vec![number(other, &pointer)?; f.num_blocks()],
        };
        RandVar::from_blocks(f, &per_block).map_err(at(&pointer))
    }

    fn risk_from(spec: &Value, here: &str, f: &SubAlgebra, cone: &Cone) -> Result<RiskMeasure> {
        object(spec, here)?;
        let kind = field(spec, "kind", here)?
            .as_str()
            .ok_or_else(|| schema(format!("{here}/kind"), "expected a string"))?;
        match kind {
            "entropic" => {
                let gamma = Self::block_param(spec, "gamma", here, f)?;
                RiskMeasure::entropic(f, cone.clone(), gamma).map_err(at(&format!("{here}/gamma")))
            }
            "avar" => {
                let lambda = Self::block_param(spec, "lambda", here, f)?;
                RiskMeasure::avar(f, cone.clone(), lambda).map_err(at(&format!("{here}/lambda")))
            }
            "worst_case" => RiskMeasure::worst_case(f, cone.clone()).map_err(at(here)),
            other => Err(schema(
                format!("{here}/kind"),
                format!("unknown kind `{other}`; expected entropic, avar or worst_case"),
            )),
        }
    }

    pub fn position(&self, name: &str) -> Result<&Position> {
        self.positions
            .get(name)
            .ok_or_else(|| schema(format!("/positions/{}", escape(name)), format!("no position named `{name}`")))
    }

    pub fn risk(&self, name: &str) -> Result<&RiskMeasure> {
        self.risks
            .get(name)
            .ok_or_else(|| schema(format!("/risks/{}", escape(name)), format!("no risk named `{name}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_ATOMS: &str = r#"{
        "atoms": [{"id": "w0", "prob": 0.5}, {"id": "w1", "prob": 0.5}],
        "f_blocks": [["w0", "w1"]],
        "d": 1,
        "positions": {"X1": [[0.0], [1.0]]},
        "risks": {
            "entropic": {"kind": "entropic", "gamma": [1.0]},
            "avar": {"kind": "avar", "lambda": 0.5}
        }
    }"#;

    #[test]
    fn loads() {
        let sc = Scenario::from_json_str(TWO_ATOMS).unwrap();
        assert_eq!(sc.space.len(), 2);
        let v = sc.risk("entropic").unwrap().eval(sc.position("X1").unwrap()).unwrap();
        assert!((v.get(0) + 0.379_89).abs() < 1e-5);
    }

    #[test]
    fn pointers() {
        let sc = Scenario::from_json_str(TWO_ATOMS).unwrap();
        assert_eq!(
            sc.position("missing").unwrap_err(),
            Error::Schema {
                pointer: "/positions/missing".into(),
                message: "no position named `missing`".into()
            }
        );
        let bad = TWO_ATOMS.replace(r#"[[0.0], [1.0]]"#, r#"[[0.0], ["x"]]"#);
        assert!(matches!(
            Scenario::from_json_str(&bad),
            Err(Error::Schema { pointer, .. }) if pointer == "/positions/X1/1/0"
        ));
        let bad = TWO_ATOMS.replace(r#""lambda": 0.5"#, r#""lambda": 1.5"#);
        assert!(matches!(
            Scenario::from_json_str(&bad),
            Err(Error::Schema { pointer, .. }) if pointer == "/risks/avar/lambda"
        ));
        let bad = TWO_ATOMS.replace(r#""prob": 0.5}, {"id": "w1""#, r#""prob": 0.0}, {"id": "w1""#);
        assert!(matches!(
            Scenario::from_json_str(&bad),
            Err(Error::Schema { pointer, .. }) if pointer == "/atoms"
        ));
        assert!(matches!(Scenario::load("/nonexistent.json"), Err(Error::FileNotFound(_))));
    }
}
