//! Built-in scenes, the three-dimensional Lie-algebra classifier, the flat
//! bundle check and the HNPT verdict engine.

pub mod analysis;
pub mod lie3;
pub mod scenes;
pub mod verdict;

use serde::Serialize;
use thiserror::Error;

use crate::mvcalc::{
    differential, euler_field, exterior_derivative, interior_product, volume_form, Multivector,
    PolyScalar,
};
use crate::poisson::{hamiltonian_field, is_poisson_map_exact, PoissonError, PoissonStructure};
use crate::scene::SceneError;
use crate::transversal::TransversalError;

pub use analysis::{analyze_scene, AnalysisOptions, SceneAnalysis};
pub use lie3::{classify_lie3, Lie3Input, Lie3Report};
pub use scenes::{builtin_scene, builtin_scenes};
pub use verdict::{summary_line, verdict_engine, Facts, PatchFact, Property, Status, Verdict};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown Lie algebra `{0}` (known: so3, sl2, heisenberg, abelian)")]
    UnknownAlgebra(String),
    #[error("no rational frame found for a transverse circle")]
    NoCircleFrame,
    #[error("genus must be at least 2, got {0}")]
    BadGenus(u32),
    #[error("contradiction on {property}: `{holds}` says holds, `{fails}` says fails")]
    Contradiction {
        property: String,
        holds: String,
        fails: String,
    },
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error(transparent)]
    Transversal(#[from] TransversalError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatBundleReport {
    pub genus: u32,
    pub chern: i64,
    pub bound: i64,
    pub weak_hnpt_fails: bool,
    pub message: String,
}

pub fn flat_bundle_check(genus: u32, chern: i64) -> Result<FlatBundleReport, CatalogError> {
    if genus < 2 {
        return Err(CatalogError::BadGenus(genus));
    }
    let bound = 2 * (i64::from(genus) - 1);
    let within = chern != 0 && chern.unsigned_abs() <= bound as u64;
    let message = if within {
        "transverse foliation exists (Wood [33]); ϱ^*(ω^top) exact; weak HNPT fails".to_string()
    } else if chern == 0 {
        "inconclusive: Chern pairing is zero".to_string()
    } else {
        format!("inconclusive: |{chern}| exceeds 2(g−1) = {bound}")
    };
    Ok(FlatBundleReport {
        genus,
        chern,
        bound,
        weak_hnpt_fails: within,
        message,
    })
}

/// Ambient check on a Lie–Poisson dual: `C` is a Casimir and
/// `h = ι_π ι_E μ` satisfies `dh ∧ dC = 0`, so the sphere volume `ι_E μ`
/// restricts to an invariant density on each level set of `C`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereCheck {
    pub casimir: bool,
    pub h: String,
    pub dh_wedge_dc_zero: bool,
}

pub fn lie_poisson_sphere_check(
    pi: &PoissonStructure,
    casimir: &PolyScalar,
    vars: &[String],
) -> SphereCheck {
    let m = pi.dim();
    let sigma = interior_product(&euler_field(m), &volume_form(m, PolyScalar::one(m)));
    let h = interior_product(pi.bivector(), &sigma);
    let dh = exterior_derivative(&h);
    SphereCheck {
        casimir: hamiltonian_field(pi, casimir).is_zero(),
        h: h.coeff(&[]).display(vars),
        dh_wedge_dc_zero: dh.wedge(&differential(casimir)).is_zero(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeckCheck {
    pub preserves_pi: bool,
    pub involution: bool,
    pub jacobian_det: String,
    pub euler_equivariant: bool,
    /// Constant negative Jacobian together with Euler equivariance: the
    /// induced map on each sphere reverses `ι_E μ`.
    pub reverses_sphere_orientation: bool,
}

fn poly_det(m: &[Vec<PolyScalar>], nvars: usize) -> PolyScalar {
    let n = m.len();
    if n == 0 {
        return PolyScalar::one(nvars);
    }
    let mut acc = PolyScalar::zero(nvars);
    for (j, head) in m[0].iter().enumerate() {
        if head.is_zero() {
            continue;
        }
        let minor: Vec<Vec<PolyScalar>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let t = head * &poly_det(&minor, nvars);
        if j % 2 == 0 {
            acc += &t;
        } else {
            acc -= &t;
        }
    }
    acc
}

pub fn deck_check(pi: &PoissonStructure, phi: &[PolyScalar], vars: &[String]) -> DeckCheck {
    let m = pi.dim();
    let jac: Vec<Vec<PolyScalar>> = phi.iter().map(|c| c.gradient()).collect();
    let det = poly_det(&jac, m);
    let involution = phi
        .iter()
        .enumerate()
        .all(|(i, c)| c.compose(phi) == PolyScalar::var(m, i));
    let euler_equivariant = (0..m).all(|i| {
        let mut push = PolyScalar::zero(m);
        for (j, d) in jac[i].iter().enumerate() {
            push += &(d * &PolyScalar::var(m, j));
        }
        push == phi[i]
    });
    let negative_constant = det
        .constant_value()
        .is_some_and(|c| c < num_traits::Zero::zero());
    DeckCheck {
        preserves_pi: is_poisson_map_exact(phi, pi.bivector(), pi.bivector()),
        involution,
        jacobian_det: det.display(vars),
        euler_equivariant,
        reverses_sphere_orientation: negative_constant && euler_equivariant,
    }
}

/// Bivector `Σ coeff ∂_i∧∂_j` from a term list.
pub fn bivector_from_terms(dim: usize, terms: &[((usize, usize), PolyScalar)]) -> Multivector {
    let mut b = Multivector::zero(dim, 2);
    for ((i, j), c) in terms {
        b += &Multivector::basis(dim, &[*i, *j], c.clone());
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvcalc::int;
    use crate::poisson::{lie_poisson, LieAlgebraData};

    fn xyz() -> Vec<String> {
        ["x", "y", "z"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn flat_bundle_bounds() {
        assert!(flat_bundle_check(2, 1).unwrap().weak_hnpt_fails);
        assert!(!flat_bundle_check(2, 3).unwrap().weak_hnpt_fails);
        assert!(flat_bundle_check(5, -8).unwrap().weak_hnpt_fails);
        assert!(!flat_bundle_check(3, 0).unwrap().weak_hnpt_fails);
        assert!(flat_bundle_check(1, 0).is_err());
    }

    #[test]
    fn so3_sphere_density() {
        let pi = lie_poisson(&LieAlgebraData::so3()).unwrap();
        let c: PolyScalar = (0..3)
            .map(|i| PolyScalar::var(3, i).pow(2))
            .fold(PolyScalar::zero(3), |a, b| &a + &b);
        let r = lie_poisson_sphere_check(&pi, &c, &xyz());
        assert!(r.casimir && r.dh_wedge_dc_zero);
        let not_casimir = PolyScalar::var(3, 0);
        assert!(!lie_poisson_sphere_check(&pi, &not_casimir, &xyz()).casimir);
    }

    #[test]
    fn antipodal_deck_on_rescaled_so3() {
        let so3 = lie_poisson(&LieAlgebraData::so3()).unwrap();
        let z = PolyScalar::var(3, 2);
        let scaled = PoissonStructure::new(so3.bivector().scale(&z)).unwrap();
        let anti: Vec<PolyScalar> = (0..3)
            .map(|i| PolyScalar::var(3, i).scale(&int(-1)))
            .collect();
        let r = deck_check(&scaled, &anti, &xyz());
        assert!(
            r.preserves_pi && r.involution && r.euler_equivariant && r.reverses_sphere_orientation
        );
        assert_eq!(r.jacobian_det, "-1");
        // the linear structure itself is anti-invariant
        assert!(!deck_check(&so3, &anti, &xyz()).preserves_pi);
    }
}
