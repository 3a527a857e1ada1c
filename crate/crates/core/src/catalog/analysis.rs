//! Runs every check applicable to a scene and feeds the results to the
//! verdict engine.

use num_traits::Zero;
use serde::Serialize;

use super::lie3::{classify_lie3, Lie3Input, Lie3Report};
use super::verdict::{summary_line, verdict_engine, Facts, PatchFact, Verdict};
use super::{
    deck_check, flat_bundle_check, lie_poisson_sphere_check, CatalogError, DeckCheck,
    FlatBundleReport, SphereCheck,
};
use crate::dirac::dirac_unimodular_check;
use crate::mvcalc::{fmt_rational, ExprForm};
use crate::numfmt;
use crate::poisson::{
    check_invariant_density, fiber_integrate, jacobi_check, log_symplectic_analysis, modular_chain,
    solve_invariant_density, Density, FiberSpec, JacobiVerdict, PoissonStructure, Witness,
    WitnessKind,
};
use crate::quadrature::NodeCounts;
use crate::scene::Scene;
use crate::transversal::{hnpt_certificate, point_coorientation, transversality_check};

#[derive(Debug, Clone, Copy)]
pub struct AnalysisOptions {
    pub tol: f64,
    pub counts: NodeCounts,
    pub solver_degree: u32,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            counts: NodeCounts::default(),
            solver_degree: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JacobiFact {
    pub poisson: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityFact {
    pub name: String,
    pub coefficient: String,
    pub invariant: bool,
    pub residual: String,
    /// `(k, closed)` for `ι_{π^k} μ`.
    pub chain: Vec<(usize, bool)>,
    pub dirac_closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverFact {
    pub degree: u32,
    pub basis: Vec<String>,
    pub constant_in_span: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateFact {
    pub density: String,
    pub q: usize,
    pub orientation: i32,
    #[serde(serialize_with = "numfmt::serialize")]
    pub integral: f64,
    #[serde(serialize_with = "numfmt::serialize")]
    pub previous: f64,
    pub converged: bool,
    #[serde(serialize_with = "numfmt::serialize")]
    pub min_integrand: f64,
    pub all_positive: bool,
    pub nontrivial: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatchReport {
    pub name: String,
    pub dim: usize,
    pub codim: Option<usize>,
    pub transversal: Option<bool>,
    pub sign_constant: Option<bool>,
    pub sign: Option<i32>,
    #[serde(serialize_with = "serialize_opt")]
    pub min_abs: Option<f64>,
    pub coorientation: Option<i32>,
    pub certificate: Option<CertificateFact>,
    pub note: Option<String>,
}

fn serialize_opt<S: serde::Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&numfmt::round_sig(*v)),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogFact {
    pub f: String,
    pub affine_coordinate: Option<String>,
    pub certified: bool,
    pub witnesses: Vec<WitnessFact>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessFact {
    #[serde(serialize_with = "numfmt::serialize_vec")]
    pub point: Vec<f64>,
    #[serde(serialize_with = "numfmt::serialize")]
    pub value: f64,
    pub kind: String,
}

impl From<&Witness> for WitnessFact {
    fn from(w: &Witness) -> Self {
        use crate::poisson::WitnessKind::*;
        let kind = match &w.kind {
            OnLocus {
                transverse: true, ..
            } => "on Z, df transverse".to_string(),
            OnLocus {
                transverse: false, ..
            } => "on Z, df vanishes".to_string(),
            OffLocus { sign } => format!("off Z, sign {sign:+}"),
            Inconclusive => "inconclusive".to_string(),
        };
        WitnessFact {
            point: w.point.clone(),
            value: w.value,
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberFact {
    pub form: String,
    /// `(base point, coefficient of f_% μ)`.
    pub pushed: Vec<(Vec<f64>, String)>,
    #[serde(serialize_with = "numfmt::serialize")]
    pub chain_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SceneAnalysis {
    pub scene: String,
    pub jacobi: Option<JacobiFact>,
    pub densities: Vec<DensityFact>,
    pub solver: Option<SolverFact>,
    pub book: Option<Lie3Report>,
    pub patches: Vec<PatchReport>,
    pub log_symplectic: Option<LogFact>,
    pub sphere: Option<SphereCheck>,
    pub deck: Option<DeckCheck>,
    pub fiber: Option<FiberFact>,
    pub flat_bundle: Option<FlatBundleReport>,
    pub annotations: Vec<String>,
    pub superseded: Vec<String>,
    pub verdicts: Vec<Verdict>,
    pub summary: String,
}

fn density_fact(pi: &PoissonStructure, name: &str, mu: &Density, vars: &[String]) -> DensityFact {
    let check = check_invariant_density(pi, mu);
    DensityFact {
        name: name.into(),
        coefficient: mu.coefficient().display(vars),
        invariant: check.invariant,
        residual: check.residual.display(vars),
        chain: modular_chain(pi, mu)
            .iter()
            .map(|l| (l.k, l.closed))
            .collect(),
        dirac_closed: dirac_unimodular_check(pi, mu).closed,
    }
}

/// All checks for a verified Poisson scene.
struct PoissonRun {
    densities: Vec<DensityFact>,
    solver: SolverFact,
    certified: Option<(String, Density)>,
    patches: Vec<PatchReport>,
    facts: Vec<PatchFact>,
    log: Option<LogFact>,
    log_certified: Option<bool>,
}

fn run_poisson(
    scene: &Scene,
    pi: &PoissonStructure,
    opts: &AnalysisOptions,
) -> Result<PoissonRun, CatalogError> {
    let vars = &scene.chart.coords;
    let m = pi.dim();
    let mut densities = Vec::new();
    let mut certified = None;
    for (name, mu) in scene.densities()? {
        let f = density_fact(pi, &name, &mu, vars);
        if f.invariant && certified.is_none() && mu.coefficient().constant_value().is_some() {
            certified = Some((format!("invariant constant density {name}"), mu.clone()));
        }
        densities.push(f);
    }
    let sol = solve_invariant_density(pi, opts.solver_degree);
    let solver = SolverFact {
        degree: sol.degree_bound,
        basis: sol.basis.iter().map(|g| g.display(vars)).collect(),
        constant_in_span: sol.constant_in_span,
    };
    if certified.is_none() && sol.constant_in_span {
        certified = Some((
            "solver: constant density invariant".into(),
            Density::coordinate(m),
        ));
    }

    let mut patches = Vec::new();
    let mut facts = Vec::new();
    for x in scene.patch_objects()? {
        let mut rep = PatchReport {
            name: x.name().into(),
            dim: x.dim(),
            codim: None,
            transversal: None,
            sign_constant: None,
            sign: None,
            min_abs: None,
            coorientation: None,
            certificate: None,
            note: None,
        };
        let mut fact = PatchFact {
            name: x.name().into(),
            dim: x.dim(),
            is_point: x.is_point(),
            ..Default::default()
        };
        match transversality_check(pi, &x, opts.counts, opts.tol) {
            Ok(t) => {
                rep.codim = Some(t.codim);
                rep.transversal = Some(t.is_transversal);
                rep.sign_constant = Some(t.sign_constant);
                rep.sign = t.is_transversal.then(|| t.sign());
                rep.min_abs = Some(t.min_abs);
                fact.transversal = t.is_transversal && t.sign_constant;
            }
            Err(e) => rep.note = Some(e.to_string()),
        }
        if x.is_point() && m.is_multiple_of(2) && fact.transversal {
            let p = x.eval(&[]);
            rep.coorientation = point_coorientation(pi, &p, opts.tol).ok();
            fact.coorientation = rep.coorientation;
        }
        if let (Some((name, mu)), true) = (&certified, fact.transversal) {
            match hnpt_certificate(pi, mu, vars, &x, opts.counts, opts.tol) {
                Ok(c) => {
                    fact.pairing_positive = c.nontrivial;
                    rep.certificate = Some(CertificateFact {
                        density: name.clone(),
                        q: c.q,
                        orientation: c.orientation,
                        integral: c.integral,
                        previous: c.previous,
                        converged: c.converged,
                        min_integrand: c.min_integrand,
                        all_positive: c.all_positive,
                        nontrivial: c.nontrivial,
                    });
                }
                Err(e) => rep.note = Some(e.to_string()),
            }
        }
        patches.push(rep);
        facts.push(fact);
    }

    let (log, log_certified) = if m.is_multiple_of(2) && m > 0 {
        let r = log_symplectic_analysis(pi, &scene.witnesses, opts.tol)?;
        let nonzero_constant = r.f.constant_value().is_some_and(|c| !c.is_zero());
        let certified = nonzero_constant || (r.affine_coordinate.is_some() && !r.f.is_constant());
        let refuted = r.f.is_zero()
            || r.witnesses.iter().any(|w| {
                matches!(
                    w.kind,
                    WitnessKind::OnLocus {
                        transverse: false,
                        ..
                    }
                )
            });
        let decided = if certified {
            Some(true)
        } else if refuted {
            Some(false)
        } else {
            None
        };
        let fact = LogFact {
            f: r.f.display(vars),
            affine_coordinate: r.affine_coordinate.map(|i| vars[i].clone()),
            certified,
            witnesses: r.witnesses.iter().map(WitnessFact::from).collect(),
        };
        (Some(fact), decided)
    } else {
        (None, None)
    };
    Ok(PoissonRun {
        densities,
        solver,
        certified,
        patches,
        facts,
        log,
        log_certified,
    })
}

fn fiber_fact(scene: &Scene, opts: &AnalysisOptions) -> Result<Option<FiberFact>, CatalogError> {
    let Some((base_dim, directions)) = scene.fiber_directions()? else {
        return Ok(None);
    };
    let Some((name, mu)) = scene.densities()?.into_iter().next() else {
        return Ok(None);
    };
    let vars = &scene.chart.coords;
    let form = ExprForm::from_form(vars, mu.top_form());
    let spec = FiberSpec {
        base_dim,
        directions,
    };
    let integral = fiber_integrate(&form, spec, opts.counts)
        .map_err(|e| CatalogError::Scene(crate::scene::SceneError::BadValue(e.to_string())))?;
    let base_points: Vec<Vec<f64>> = vec![
        vec![0.0; base_dim],
        vec![0.5; base_dim],
        vec![-1.0; base_dim],
    ];
    let mut pushed = Vec::new();
    let mut residual: f64 = 0.0;
    for p in &base_points {
        let v = integral.eval(p);
        let text = v
            .iter()
            .map(|(idx, c)| {
                let basis: Vec<String> = idx.iter().map(|&i| format!("d{}", vars[i])).collect();
                format!("{} {}", numfmt::fmt_sig(*c), basis.join("^"))
            })
            .collect::<Vec<_>>()
            .join(" + ");
        pushed.push((p.clone(), text));
        // d f_% μ vanishes for a top-degree pushforward; record the size.
        for c in integral.differential_eval(p).values() {
            residual = residual.max(c.abs());
        }
    }
    Ok(Some(FiberFact {
        form: format!("{name} = {}", mu.coefficient().display(vars)),
        pushed,
        chain_residual: residual,
    }))
}

pub fn analyze_scene(scene: &Scene, opts: &AnalysisOptions) -> Result<SceneAnalysis, CatalogError> {
    scene.validate()?;
    let vars = &scene.chart.coords;
    let mut out = SceneAnalysis {
        scene: scene.name.clone(),
        jacobi: None,
        densities: Vec::new(),
        solver: None,
        book: None,
        patches: Vec::new(),
        log_symplectic: None,
        sphere: None,
        deck: None,
        fiber: None,
        flat_bundle: None,
        annotations: scene.annotations.clone(),
        superseded: Vec::new(),
        verdicts: Vec::new(),
        summary: String::new(),
    };
    let mut facts = Facts {
        annotations: scene.annotations.iter().cloned().collect(),
        ..Default::default()
    };

    if let Some(b) = scene.bivector()? {
        let verdict = jacobi_check(&b);
        let poisson = verdict.is_ok();
        out.jacobi = Some(JacobiFact {
            poisson,
            witness: match verdict {
                JacobiVerdict::Ok => None,
                JacobiVerdict::Witness { index, coeff } => {
                    let names: Vec<&str> = index.iter().map(|&i| vars[i].as_str()).collect();
                    Some(format!(
                        "[π,π] ∋ ({}) ∂{}",
                        coeff.display(vars),
                        names.join("∧∂")
                    ))
                }
            },
        });
        if !poisson {
            // nothing downstream is meaningful for a non-Poisson bivector
            let set = verdict_engine(&Facts::default())?;
            out.summary = summary_line(&set.verdicts);
            out.verdicts = set.verdicts;
            return Ok(out);
        }
        let pi = PoissonStructure::new(b)?;
        facts.poisson = true;
        let run = run_poisson(scene, &pi, opts)?;
        out.densities = run.densities;
        out.solver = Some(run.solver);
        out.patches = run.patches;
        out.log_symplectic = run.log;
        facts.unimodular = run.certified.map(|(w, _)| w);
        facts.patches = run.facts;
        facts.log_symplectic = run.log_certified;
        if let Some(c) = scene.casimir_poly()? {
            out.sphere = Some(lie_poisson_sphere_check(&pi, &c, vars));
        }
        if let Some(phi) = scene.deck()? {
            let d = deck_check(&pi, &phi, vars);
            facts.deck_reverses_orientation =
                Some(d.preserves_pi && d.involution && d.reverses_sphere_orientation);
            out.deck = Some(d);
        }
        out.fiber = fiber_fact(scene, opts)?;
    }
    if let Some(a) = scene.book()? {
        let r = classify_lie3(&Lie3Input::Matrix(a), opts.counts.periodic, opts.tol)?;
        if r.unimodular && facts.unimodular.is_none() {
            facts.unimodular = Some("trace criterion tr(A) = 0".into());
        }
        out.book = Some(r);
    }
    if let Some(fb) = &scene.flat_bundle {
        let r = flat_bundle_check(fb.genus, fb.chern)?;
        facts.flat_bundle_weak_fails = Some(r.weak_hnpt_fails);
        out.flat_bundle = Some(r);
    }
    let set = verdict_engine(&facts)?;
    out.summary = summary_line(&set.verdicts);
    out.verdicts = set.verdicts;
    out.superseded = set.superseded;
    Ok(out)
}

/// Rational rendering used in book matrices.
pub fn fmt_matrix(a: &[[crate::mvcalc::Rational; 2]; 2]) -> String {
    format!(
        "[[{}, {}], [{}, {}]]",
        fmt_rational(&a[0][0]),
        fmt_rational(&a[0][1]),
        fmt_rational(&a[1][0]),
        fmt_rational(&a[1][1])
    )
}
