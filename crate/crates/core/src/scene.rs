//! JSON scene files: a chart, an optional Poisson bivector, densities,
//! patches and declared facts.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mvcalc::{
    parse_expr, parse_rational, DiffForm, ExprError, Multivector, PolyScalar, Rational,
};
use crate::poisson::{Density, PoissonError, PoissonStructure};
use crate::quadrature::Direction;
use crate::transversal::{parse_range_value, ParamSpec, Patch, TransversalError};

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("chart declares dim {dim} but {coords} coordinates")]
    ChartArity { dim: usize, coords: usize },
    #[error("duplicate or invalid coordinate name `{0}`")]
    BadCoordinate(String),
    #[error("bivector term indices {0:?} must be an increasing pair within the chart")]
    BadIndices(Vec<usize>),
    #[error("{context}: {source}")]
    Expression { context: String, source: ExprError },
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Patch(#[from] TransversalError),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("bad value `{0}`")]
    BadValue(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Chart {
    pub dim: usize,
    pub coords: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BivectorTerm {
    pub indices: Vec<usize>,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoissonSpec {
    pub terms: Vec<BivectorTerm>,
}

/// A differential form `Σ coeff dx_I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    pub name: String,
    pub terms: Vec<BivectorTerm>,
}

/// `coeff · dx_1 ∧ … ∧ dx_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySpec {
    pub name: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamDecl {
    pub name: String,
    pub range: [String; 2],
    #[serde(default)]
    pub periodic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchSpec {
    pub name: String,
    #[serde(default)]
    pub params: Vec<ParamDecl>,
    pub map: Vec<String>,
}

/// Trailing chart coordinates forming a compact fibre.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberDecl {
    pub base_dim: usize,
    pub ranges: Vec<[String; 2]>,
    pub periodic: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatBundleDecl {
    pub genus: u32,
    pub chern: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub chart: Chart,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poisson: Option<PoissonSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub densities: Vec<DensitySpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub forms: Vec<FormSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub patches: Vec<PatchSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<String>,
    /// Where the scene's facts come from, e.g. "Example 7".
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sources: Vec<String>,
    /// Book structure matrix `[a, b, c, d]` as rationals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub book_matrix: Option<[String; 4]>,
    /// Polynomial Casimir used for the Lie–Poisson sphere check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub casimir: Option<String>,
    /// Polynomial deck transformation of a double cover.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deck_map: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fiber: Option<FiberDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flat_bundle: Option<FlatBundleDecl>,
    /// Sample points for log-symplectic analysis.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

impl Scene {
    pub fn from_json(text: &str) -> Result<Self, SceneError> {
        let scene: Scene = serde_json::from_str(text)?;
        scene.validate()?;
        Ok(scene)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }

    /// Checks every declared object parses under the chart.
    pub fn validate(&self) -> Result<(), SceneError> {
        let c = &self.chart;
        if c.coords.len() != c.dim {
            return Err(SceneError::ChartArity {
                dim: c.dim,
                coords: c.coords.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for name in &c.coords {
            let ok = name
                .chars()
                .next()
                .is_some_and(|ch| ch.is_ascii_alphabetic() || ch == '_')
                && name
                    .chars()
                    .all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
                && name != "sin"
                && name != "cos";
            if !ok || !seen.insert(name.clone()) {
                return Err(SceneError::BadCoordinate(name.clone()));
            }
        }
        self.bivector()?;
        self.densities()?;
        self.forms()?;
        self.patch_objects()?;
        self.book()?;
        self.casimir_poly()?;
        self.deck()?;
        self.fiber_directions()?;
        Ok(())
    }

    fn poly(&self, src: &str, context: impl Into<String>) -> Result<PolyScalar, SceneError> {
        let context = context.into();
        let e = parse_expr(src, &self.chart.coords, false).map_err(|source| {
            SceneError::Expression {
                context: context.clone(),
                source,
            }
        })?;
        e.to_poly()
            .map_err(|source| SceneError::Expression { context, source })
    }

    /// The declared bivector (unverified), if any.
    pub fn bivector(&self) -> Result<Option<Multivector>, SceneError> {
        let Some(spec) = &self.poisson else {
            return Ok(None);
        };
        let m = self.chart.dim;
        let mut b = Multivector::zero(m, 2);
        for t in &spec.terms {
            if t.indices.len() != 2 || t.indices[0] >= t.indices[1] || t.indices[1] >= m {
                return Err(SceneError::BadIndices(t.indices.clone()));
            }
            let c = self.poly(&t.coeff, format!("poisson term {:?}", t.indices))?;
            b += &Multivector::basis(m, &t.indices, c);
        }
        Ok(Some(b))
    }

    pub fn poisson_structure(&self) -> Result<Option<PoissonStructure>, SceneError> {
        Ok(match self.bivector()? {
            Some(b) => Some(PoissonStructure::new(b)?),
            None => None,
        })
    }

    pub fn densities(&self) -> Result<Vec<(String, Density)>, SceneError> {
        self.densities
            .iter()
            .map(|d| {
                let g = self.poly(&d.coeff, format!("density `{}`", d.name))?;
                Ok((d.name.clone(), Density::from_coefficient(g)?))
            })
            .collect()
    }

    pub fn density(&self, name: &str) -> Result<Density, SceneError> {
        self.densities()?
            .into_iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| d)
            .ok_or_else(|| SceneError::Unknown {
                kind: "density",
                name: name.into(),
            })
    }

    pub fn forms(&self) -> Result<Vec<(String, DiffForm)>, SceneError> {
        let m = self.chart.dim;
        self.forms
            .iter()
            .map(|f| {
                let degree = f.terms.first().map_or(0, |t| t.indices.len());
                let mut form = DiffForm::zero(m, degree);
                for t in &f.terms {
                    let sorted = t.indices.windows(2).all(|w| w[0] < w[1]);
                    if t.indices.len() != degree || !sorted || t.indices.iter().any(|&i| i >= m) {
                        return Err(SceneError::BadIndices(t.indices.clone()));
                    }
                    let c = self.poly(&t.coeff, format!("form `{}`", f.name))?;
                    form += &DiffForm::basis(m, &t.indices, c);
                }
                Ok((f.name.clone(), form))
            })
            .collect()
    }

    pub fn form(&self, name: &str) -> Result<DiffForm, SceneError> {
        self.forms()?
            .into_iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f)
            .ok_or_else(|| SceneError::Unknown {
                kind: "form",
                name: name.into(),
            })
    }

    pub fn patch_objects(&self) -> Result<Vec<Patch>, SceneError> {
        self.patches.iter().map(|p| self.build_patch(p)).collect()
    }

    pub fn patch(&self, name: &str) -> Result<Patch, SceneError> {
        let spec = self
            .patches
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| SceneError::Unknown {
                kind: "patch",
                name: name.into(),
            })?;
        self.build_patch(spec)
    }

    fn build_patch(&self, p: &PatchSpec) -> Result<Patch, SceneError> {
        let params = p
            .params
            .iter()
            .map(|d| {
                let bad = |v: &str| TransversalError::BadRange {
                    patch: p.name.clone(),
                    value: v.into(),
                };
                let lo = parse_range_value(&d.range[0]).ok_or_else(|| bad(&d.range[0]))?;
                let hi = parse_range_value(&d.range[1]).ok_or_else(|| bad(&d.range[1]))?;
                if lo >= hi {
                    return Err(bad(&d.range[1]));
                }
                Ok(ParamSpec {
                    name: d.name.clone(),
                    lo,
                    hi,
                    periodic: d.periodic,
                    reversed: false,
                })
            })
            .collect::<Result<Vec<_>, TransversalError>>()?;
        Ok(Patch::new(&p.name, self.chart.dim, params, &p.map)?)
    }

    pub fn book(&self) -> Result<Option<[[Rational; 2]; 2]>, SceneError> {
        let Some(m) = &self.book_matrix else {
            return Ok(None);
        };
        let r = |s: &String| parse_rational(s).ok_or_else(|| SceneError::BadValue(s.clone()));
        Ok(Some([[r(&m[0])?, r(&m[1])?], [r(&m[2])?, r(&m[3])?]]))
    }

    pub fn casimir_poly(&self) -> Result<Option<PolyScalar>, SceneError> {
        self.casimir
            .as_ref()
            .map(|c| self.poly(c, "casimir"))
            .transpose()
    }

    pub fn deck(&self) -> Result<Option<Vec<PolyScalar>>, SceneError> {
        let Some(map) = &self.deck_map else {
            return Ok(None);
        };
        if map.len() != self.chart.dim {
            return Err(SceneError::BadValue(format!(
                "deck map has {} components",
                map.len()
            )));
        }
        map.iter()
            .map(|c| self.poly(c, "deck map"))
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    pub fn fiber_directions(&self) -> Result<Option<(usize, Vec<Direction>)>, SceneError> {
        let Some(f) = &self.fiber else {
            return Ok(None);
        };
        if f.ranges.len() != f.periodic.len() || f.base_dim + f.ranges.len() != self.chart.dim {
            return Err(SceneError::BadValue(
                "fiber declaration does not match the chart".into(),
            ));
        }
        let dirs = f
            .ranges
            .iter()
            .zip(&f.periodic)
            .map(|(r, &periodic)| {
                let lo =
                    parse_range_value(&r[0]).ok_or_else(|| SceneError::BadValue(r[0].clone()))?;
                let hi =
                    parse_range_value(&r[1]).ok_or_else(|| SceneError::BadValue(r[1].clone()))?;
                Ok(Direction { lo, hi, periodic })
            })
            .collect::<Result<Vec<_>, SceneError>>()?;
        Ok(Some((f.base_dim, dirs)))
    }

    pub fn has(&self, annotation: &str) -> bool {
        self.annotations.iter().any(|a| a == annotation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "name": "toy",
        "chart": {"dim": 2, "coords": ["x", "y"]},
        "poisson": {"terms": [{"indices": [0, 1], "coeff": "1"}]},
        "densities": [{"name": "mu", "coeff": "1"}],
        "patches": [{"name": "p", "map": ["0", "1/2"]}]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let s = Scene::from_json(MINIMAL).unwrap();
        assert_eq!(s.poisson_structure().unwrap().unwrap().dim(), 2);
        assert_eq!(s.patch("p").unwrap().eval(&[]), vec![0.0, 0.5]);
        let again = Scene::from_json(&s.to_json()).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn rejects_bad_input() {
        let bad = MINIMAL.replace("[0, 1]", "[1, 0]");
        assert!(matches!(
            Scene::from_json(&bad),
            Err(SceneError::BadIndices(_))
        ));
        let bad = MINIMAL.replace("\"coeff\": \"1\"}]}", "\"coeff\": \"z\"}]}");
        assert!(matches!(
            Scene::from_json(&bad),
            Err(SceneError::Expression { .. })
        ));
        let bad = MINIMAL.replace("\"dim\": 2", "\"dim\": 3");
        assert!(matches!(
            Scene::from_json(&bad),
            Err(SceneError::ChartArity { .. })
        ));
        assert!(matches!(Scene::from_json("{"), Err(SceneError::Json(_))));
        let bad = MINIMAL.replace("\"name\": \"toy\",", "\"name\": \"toy\", \"colour\": 1,");
        assert!(matches!(Scene::from_json(&bad), Err(SceneError::Json(_))));
    }
}
