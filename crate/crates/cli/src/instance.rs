//! Instance file schema and its conversion into core types.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use rnm_core::separation::{ConvexBody, Shape};
use rnm_core::{AtomicSpace, Complex64, Field, L0Scalar, RNElement, RandomFunctional};
use serde::{Deserialize, Serialize};

/// Probabilities must sum to one within this before they are renormalized.
pub const PROB_TOLERANCE: f64 = 1e-9;

/// A scalar: a plain number, or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

impl Scalar {
    pub fn to_complex(self) -> Complex64 {
        match self {
            Scalar::Real(r) => Complex64::new(r, 0.0),
            Scalar::Complex([re, im]) => Complex64::new(re, im),
        }
    }

    pub fn from_complex(c: Complex64, field: Field) -> Self {
        match field {
            Field::Real => Scalar::Real(c.re),
            Field::Complex => Scalar::Complex([c.re, c.im]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldName {
    Real,
    Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub id: String,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Ball { center: Vec<Scalar>, radius: f64 },
    Hull { points: Vec<Vec<Scalar>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bodies {
    /// One shape per atom.
    pub g: Vec<BodySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<BodySpec>>,
    #[serde(default)]
    pub g_interior: bool,
}

/// The on-disk instance. Per-atom data is always listed in atom order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub space: Vec<AtomSpec>,
    pub field: FieldName,
    pub dim: usize,
    /// `functionals[i][atom]` is the Riesz vector of `fᵢ` on that atom.
    #[serde(default)]
    pub functionals: Vec<Vec<Vec<Scalar>>>,
    /// `targets[i][atom]` is `ξᵢ` on that atom.
    #[serde(default)]
    pub targets: Vec<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bodies: Option<Bodies>,
    /// `point[atom]` is a vector of length `dim`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<Vec<Scalar>>>,
}

/// A rejected input, located by a path into the instance.
#[derive(Debug, Clone, PartialEq)]
pub struct InputError {
    pub pointer: String,
    pub message: String,
}

impl InputError {
    pub fn new(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pointer.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "at `{}`: {}", self.pointer, self.message)
        }
    }
}

type Input<T> = std::result::Result<T, InputError>;

pub fn read_instance(path: &Path) -> Input<InstanceFile> {
    let text = std::fs::read_to_string(path).map_err(|e| InputError::new("", format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text)
}

pub fn parse_instance(text: &str) -> Input<InstanceFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        InputError::new(if path == "." { String::new() } else { path }, e.into_inner().to_string())
    })
}

/// The instance converted into core objects.
pub struct Loaded {
    pub file: InstanceFile,
    pub space: Arc<AtomicSpace>,
}

impl Loaded {
    pub fn new(file: InstanceFile) -> Input<Self> {
        let space = build_space(&file)?;
        if file.dim == 0 {
            return Err(InputError::new("dim", "dimension must be positive"));
        }
        Ok(Self { file, space })
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    fn scalar(&self, s: Scalar, pointer: String) -> Input<Complex64> {
        let c = s.to_complex();
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(InputError::new(pointer, "value must be finite"));
        }
        if self.field() == Field::Real && c.im != 0.0 {
            return Err(InputError::new(pointer, "complex value in a real-field instance"));
        }
        Ok(c)
    }

    fn per_atom<T>(&self, items: &[T], pointer: &str) -> Input<()> {
        if items.len() != self.space.len() {
            return Err(InputError::new(
                pointer,
                format!("expected one entry per atom ({}), found {}", self.space.len(), items.len()),
            ));
        }
        Ok(())
    }

    fn vector(&self, v: &[Scalar], pointer: &str) -> Input<Vec<Complex64>> {
        if v.len() != self.file.dim {
            return Err(InputError::new(
                pointer,
                format!("expected {} coordinates, found {}", self.file.dim, v.len()),
            ));
        }
        v.iter()
            .enumerate()
            .map(|(k, s)| self.scalar(*s, format!("{pointer}[{k}]")))
            .collect()
    }

    fn element(&self, atoms: &[Vec<Scalar>], pointer: &str) -> Input<RNElement> {
        self.per_atom(atoms, pointer)?;
        let per_atom = atoms
            .iter()
            .enumerate()
            .map(|(a, v)| self.vector(v, &format!("{pointer}[{a}]")))
            .collect::<Input<Vec<_>>>()?;
        RNElement::from_atoms(&self.space, per_atom).map_err(|e| InputError::new(pointer, e.to_string()))
    }

    fn l0(&self, values: &[Scalar], pointer: &str) -> Input<L0Scalar> {
        self.per_atom(values, pointer)?;
        let values = values
            .iter()
            .enumerate()
            .map(|(a, s)| self.scalar(*s, format!("{pointer}[{a}]")))
            .collect::<Input<Vec<_>>>()?;
        L0Scalar::new(&self.space, values).map_err(|e| InputError::new(pointer, e.to_string()))
    }

    fn real_l0(&self, values: Option<&Vec<f64>>, pointer: &str, positive: bool) -> Input<L0Scalar> {
        let values = values.ok_or_else(|| InputError::new(pointer, "missing field required by this command"))?;
        self.per_atom(values, pointer)?;
        for (a, v) in values.iter().enumerate() {
            let ok = v.is_finite() && if positive { *v > 0.0 } else { *v >= 0.0 };
            if !ok {
                let need = if positive { "positive" } else { "non-negative" };
                return Err(InputError::new(format!("{pointer}[{a}]"), format!("must be finite and {need}")));
            }
        }
        L0Scalar::from_real(&self.space, values.clone()).map_err(|e| InputError::new(pointer, e.to_string()))
    }

    pub fn functionals(&self) -> Input<Vec<RandomFunctional>> {
        if self.file.functionals.is_empty() {
            return Err(InputError::new("functionals", "at least one functional is required"));
        }
        self.file
            .functionals
            .iter()
            .enumerate()
            .map(|(i, f)| Ok(RandomFunctional::new(self.element(f, &format!("functionals[{i}]"))?)))
            .collect()
    }

    pub fn targets(&self) -> Input<Vec<L0Scalar>> {
        if self.file.targets.len() != self.file.functionals.len() {
            return Err(InputError::new(
                "targets",
                format!(
                    "expected one target per functional ({}), found {}",
                    self.file.functionals.len(),
                    self.file.targets.len()
                ),
            ));
        }
        self.file
            .targets
            .iter()
            .enumerate()
            .map(|(i, t)| self.l0(t, &format!("targets[{i}]")))
            .collect()
    }

    pub fn beta(&self) -> Input<L0Scalar> {
        self.real_l0(self.file.beta.as_ref(), "beta", false)
    }

    pub fn epsilon(&self) -> Input<L0Scalar> {
        self.real_l0(self.file.epsilon.as_ref(), "epsilon", true)
    }

    pub fn point(&self) -> Input<RNElement> {
        let point = self
            .file
            .point
            .as_ref()
            .ok_or_else(|| InputError::new("point", "missing field required by this command"))?;
        self.element(point, "point")
    }

    fn body(&self, specs: &[BodySpec], interior: bool, pointer: &str) -> Input<ConvexBody> {
        self.per_atom(specs, pointer)?;
        let shapes = specs
            .iter()
            .enumerate()
            .map(|(a, spec)| {
                let at = format!("{pointer}[{a}]");
                Ok(match spec {
                    BodySpec::Ball { center, radius } => Shape::Ball {
                        center: self.vector(center, &format!("{at}.ball.center"))?,
                        radius: *radius,
                    },
                    BodySpec::Hull { points } => {
                        if points.is_empty() {
                            return Err(InputError::new(format!("{at}.hull.points"), "hull needs at least one point"));
                        }
                        Shape::Hull {
                            points: points
                                .iter()
                                .enumerate()
                                .map(|(k, p)| self.vector(p, &format!("{at}.hull.points[{k}]")))
                                .collect::<Input<_>>()?,
                        }
                    }
                })
            })
            .collect::<Input<Vec<_>>>()?;
        ConvexBody::new(&self.space, self.file.dim, shapes, interior).map_err(|e| InputError::new(pointer, e.to_string()))
    }

    fn bodies(&self) -> Input<&Bodies> {
        self.file
            .bodies
            .as_ref()
            .ok_or_else(|| InputError::new("bodies", "missing field required by this command"))
    }

    pub fn body_g(&self) -> Input<ConvexBody> {
        let b = self.bodies()?;
        self.body(&b.g, b.g_interior, "bodies.g")
    }

    pub fn body_m(&self) -> Input<ConvexBody> {
        let b = self.bodies()?;
        let m =
            b.m.as_ref()
                .ok_or_else(|| InputError::new("bodies.m", "missing field required by this command"))?;
        self.body(m, false, "bodies.m")
    }
}

fn build_space(file: &InstanceFile) -> Input<Arc<AtomicSpace>> {
    if file.space.is_empty() {
        return Err(InputError::new("space", "at least one atom is required"));
    }
    for (a, atom) in file.space.iter().enumerate() {
        if !(atom.prob > 0.0 && atom.prob.is_finite()) {
            return Err(InputError::new(format!("space[{a}].prob"), "probability must be positive"));
        }
    }
    let total: f64 = file.space.iter().map(|a| a.prob).sum();
    if (total - 1.0).abs() > PROB_TOLERANCE {
        return Err(InputError::new("space", format!("probabilities sum to {total}, not 1")));
    }
    let field = match file.field {
        FieldName::Real => Field::Real,
        FieldName::Complex => Field::Complex,
    };
    let ids = file.space.iter().map(|a| a.id.clone()).collect();
    let probs = file.space.iter().map(|a| a.prob / total).collect();
    AtomicSpace::new(ids, probs, field).map_err(|e| InputError::new("space", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SOLVE: &str = r#"{
        "space": [{"id": "a1", "prob": 1.0}],
        "field": "real",
        "dim": 2,
        "functionals": [[[1, 0]], [[0, 1]]],
        "targets": [[3], [4]],
        "beta": [5],
        "epsilon": [0.1]
    }"#;

    #[test]
    fn parses_and_converts() {
        let loaded = Loaded::new(parse_instance(SOLVE).unwrap()).unwrap();
        assert_eq!(loaded.functionals().unwrap().len(), 2);
        assert_eq!(loaded.targets().unwrap()[1].at(0).re, 4.0);
        assert_eq!(loaded.beta().unwrap().at(0).re, 5.0);
    }

    #[test]
    fn schema_errors_carry_a_pointer() {
        let bad = SOLVE.replace(r#""dim": 2"#, r#""dim": "two""#);
        assert_eq!(parse_instance(&bad).unwrap_err().pointer, "dim");
        let bad = SOLVE.replace(r#"[[0, 1]]"#, r#"[[0, 1, 2]]"#);
        let loaded = Loaded::new(parse_instance(&bad).unwrap()).unwrap();
        assert_eq!(loaded.functionals().err().unwrap().pointer, "functionals[1][0]");
        let bad = SOLVE.replace(r#"[[1, 0]]"#, r#"[[[1, 2], 0]]"#);
        let loaded = Loaded::new(parse_instance(&bad).unwrap()).unwrap();
        assert_eq!(loaded.functionals().err().unwrap().pointer, "functionals[0][0][0]");
    }

    #[test]
    fn probabilities_are_checked_then_renormalized() {
        let near = SOLVE.replace(r#""prob": 1.0"#, r#""prob": 1.0000000001"#);
        let loaded = Loaded::new(parse_instance(&near).unwrap()).unwrap();
        assert_eq!(loaded.space.prob(0), 1.0);
        let off = SOLVE.replace(r#""prob": 1.0"#, r#""prob": 0.9"#);
        assert_eq!(Loaded::new(parse_instance(&off).unwrap()).err().unwrap().pointer, "space");
    }

    #[test]
    fn round_trips() {
        let file = parse_instance(SOLVE).unwrap();
        let text = serde_json::to_string(&file).unwrap();
        assert_eq!(parse_instance(&text).unwrap(), file);
    }
}
