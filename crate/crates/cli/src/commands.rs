use num_traits::Zero;
use serde_json::{json, Value};

use ptk_core::catalog::lie3::named_matrix;
use ptk_core::catalog::{
    analyze_scene, builtin_scenes, classify_lie3, AnalysisOptions, CatalogError, Lie3Input,
    Lie3Report, SceneAnalysis, Status,
};
use ptk_core::mvcalc::{parse_rational, DiffForm, Multivector, Rational};
use ptk_core::numfmt::{fmt_sig, round_sig};
use ptk_core::poisson::{
    check_invariant_density, coordinate_jacobi_holds, jacobi_check, modular_chain,
    solve_invariant_density, Density, JacobiVerdict, PoissonStructure,
};
use ptk_core::scene::{Scene, SceneError};
use ptk_core::transversal::{
    hnpt_certificate, pair as pair_form, point_coorientation, transversality_check, HnptError,
};

use crate::render::{point, sign, yes_no, Text};
use crate::{CliError, Exit, Report, Settings};

fn scene_err(e: SceneError) -> CliError {
    CliError::Scene(e.to_string())
}

fn bivector(scene: &Scene) -> Result<Multivector, CliError> {
    scene.bivector().map_err(scene_err)?.ok_or_else(|| {
        CliError::Input(format!(
            "scene `{}` declares no Poisson bivector",
            scene.name
        ))
    })
}

fn poisson(scene: &Scene) -> Result<PoissonStructure, CliError> {
    PoissonStructure::new(bivector(scene)?)
        .map_err(|e| CliError::Input(format!("scene `{}`: {e}", scene.name)))
}

fn header(t: &mut Text, scene: &Scene) {
    t.kv("scene", &scene.name);
    t.kv("chart", format!("({})", scene.chart.coords.join(", ")));
}

pub fn verify(scene: &Scene) -> Result<Report, CliError> {
    let b = bivector(scene)?;
    let vars = &scene.chart.coords;
    let verdict = jacobi_check(&b);
    let oracle = coordinate_jacobi_holds(&b);
    let mut t = Text::default();
    header(&mut t, scene);
    t.kv("π", b.display(vars));
    let (exit, witness) = match &verdict {
        JacobiVerdict::Ok => {
            t.line("[π,π] = 0");
            t.kv("verdict", "Poisson");
            (Exit::Holds, Value::Null)
        }
        JacobiVerdict::Witness { index, coeff } => {
            let term = Multivector::basis(b.dim(), index, coeff.clone()).display(vars);
            t.kv("[π,π] ∋", &term);
            t.kv("verdict", "not Poisson");
            (Exit::Fails, json!(term))
        }
    };
    t.kv(
        "coordinate Jacobi identity",
        if oracle { "holds" } else { "fails" },
    );
    Ok(Report {
        text: t.finish(),
        json: json!({
            "command": "verify",
            "scene": scene.name,
            "bivector": b.display(vars),
            "poisson": verdict.is_ok(),
            "witness": witness,
            "coordinate_jacobi": oracle,
        }),
        exit,
        raw: false,
    })
}

fn form_text(f: &DiffForm, vars: &[String]) -> String {
    f.display(vars)
}

pub fn unimodular(
    scene: &Scene,
    degree: Option<u32>,
    density: Option<&str>,
    _s: &Settings,
) -> Result<Report, CliError> {
    let pi = poisson(scene)?;
    let vars = &scene.chart.coords;
    let mut t = Text::default();
    header(&mut t, scene);
    t.kv("π", pi.bivector().display(vars));
    if let Some(name) = density {
        let mu = scene.density(name).map_err(scene_err)?;
        let check = check_invariant_density(&pi, &mu);
        let chain = modular_chain(&pi, &mu);
        t.kv(&format!("density {name}"), form_text(mu.top_form(), vars));
        t.kv("d ι_π μ", form_text(&check.residual, vars));
        t.line("modular chain:");
        let mut links = Vec::new();
        for l in &chain {
            let status = if l.closed {
                "closed".to_string()
            } else {
                format!("not closed, d = {}", form_text(&l.differential, vars))
            };
            t.line(format!("  k={}: ι_(π^{}) μ {status}", l.k, l.k));
            links.push(json!({
                "k": l.k,
                "closed": l.closed,
                "differential": form_text(&l.differential, vars),
            }));
        }
        let exit = if check.invariant {
            Exit::Holds
        } else {
            Exit::Fails
        };
        t.kv(
            "verdict",
            if check.invariant {
                "invariant density: unimodular"
            } else {
                "density is not invariant"
            },
        );
        return Ok(Report {
            text: t.finish(),
            json: json!({
                "command": "unimodular",
                "scene": scene.name,
                "density": name,
                "invariant": check.invariant,
                "residual": form_text(&check.residual, vars),
                "chain": links,
            }),
            exit,
            raw: false,
        });
    }

    let d = degree.unwrap_or(0);
    let sol = solve_invariant_density(&pi, d);
    let basis: Vec<String> = sol.basis.iter().map(|g| g.display(vars)).collect();
    t.kv(
        "solver",
        format!(
            "g·d{} with deg g ≤ {d} and d ι_π (g·vol) = 0",
            vars.join("∧d")
        ),
    );
    t.kv("basis", format!("{{{}}}", basis.join(", ")));
    let trace = scene
        .book()
        .map_err(scene_err)?
        .map(|a| &a[0][0] + &a[1][1]);
    let (verdict, exit) = if sol.constant_in_span {
        (
            "unimodular (constant density invariant)".to_string(),
            Exit::Holds,
        )
    } else if let Some(tr) = trace.as_ref().filter(|tr| !tr.is_zero()) {
        (
            format!(
                "not unimodular (tr(A) = {} ≠ 0)",
                ptk_core::mvcalc::fmt_rational(tr)
            ),
            Exit::Fails,
        )
    } else if basis.is_empty() {
        (
            format!("no invariant density up to degree {d}"),
            Exit::Inconclusive,
        )
    } else {
        (
            format!("invariant densities up to degree {d}; positivity not certified"),
            Exit::Inconclusive,
        )
    };
    t.kv("verdict", &verdict);
    Ok(Report {
        text: t.finish(),
        json: json!({
            "command": "unimodular",
            "scene": scene.name,
            "degree": d,
            "basis": basis,
            "constant_in_span": sol.constant_in_span,
            "trace": trace.map(|tr| ptk_core::mvcalc::fmt_rational(&tr)),
            "verdict": verdict,
        }),
        exit,
        raw: false,
    })
}

fn core_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

pub fn transversal(scene: &Scene, patch: &str, s: &Settings) -> Result<Report, CliError> {
    let pi = poisson(scene)?;
    let x = scene.patch(patch).map_err(scene_err)?;
    let rep = transversality_check(&pi, &x, s.counts, s.tol).map_err(core_err)?;
    let mut t = Text::default();
    header(&mut t, scene);
    t.kv(
        "patch",
        format!("{} (dim {}, codim {})", x.name(), x.dim(), rep.codim),
    );
    if !x.is_point() {
        t.kv("samples", rep.samples.len().to_string());
    }
    let q = rep.codim / 2;
    t.kv(&format!("min |⟨Ω, π^{q}∧τ⟩|"), fmt_sig(rep.min_abs));
    let weakest = rep.weakest().map(|(p, v)| (p.clone(), *v));
    if let Some((p, v)) = &weakest {
        if !x.is_point() {
            t.kv(
                "weakest sample",
                format!("t = {} value {}", point(p), fmt_sig(*v)),
            );
        }
    }
    let coorientation = if x.is_point() && pi.dim() % 2 == 0 && rep.is_transversal {
        point_coorientation(&pi, &x.eval(&[]), s.tol).ok()
    } else {
        None
    };
    let ok = rep.is_transversal && rep.sign_constant;
    if ok {
        t.kv("sign", sign(rep.sign()));
    } else if rep.is_transversal {
        t.kv("sign", "changes");
    }
    if let Some(c) = coorientation {
        t.kv("coorientation", sign(c));
    }
    t.kv(
        "verdict",
        if ok {
            "Poisson transversal"
        } else {
            "not a Poisson transversal (determinant vanishes or changes sign)"
        },
    );
    Ok(Report {
        text: t.finish(),
        json: json!({
            "command": "transversal",
            "scene": scene.name,
            "patch": x.name(),
            "codim": rep.codim,
            "transversal": rep.is_transversal,
            "sign_constant": rep.sign_constant,
            "sign": if ok { json!(rep.sign()) } else { Value::Null },
            "min_abs": round_sig(rep.min_abs),
            "weakest": weakest.map(|(p, v)| json!({"t": p.iter().map(|x| round_sig(*x)).collect::<Vec<_>>(), "value": round_sig(v)})),
            "coorientation": coorientation,
        }),
        exit: if ok { Exit::Holds } else { Exit::Fails },
        raw: false,
    })
}

fn pick_density(
    scene: &Scene,
    pi: &PoissonStructure,
    name: Option<&str>,
) -> Result<(String, Density), CliError> {
    if let Some(n) = name {
        return Ok((n.to_string(), scene.density(n).map_err(scene_err)?));
    }
    let all = scene.densities().map_err(scene_err)?;
    let first = all.first().cloned();
    all.into_iter()
        .find(|(_, mu)| check_invariant_density(pi, mu).invariant)
        .or(first)
        .map_or_else(
            || Ok(("coordinate".into(), Density::coordinate(pi.dim()))),
            Ok,
        )
}

pub fn pair(
    scene: &Scene,
    patch: &str,
    form: &str,
    density: Option<&str>,
    s: &Settings,
) -> Result<Report, CliError> {
    let pi = poisson(scene)?;
    let vars = &scene.chart.coords;
    let x = scene.patch(patch).map_err(scene_err)?;
    let mut t = Text::default();
    header(&mut t, scene);
    t.kv("patch", format!("{} (dim {})", x.name(), x.dim()));
    if form != "auto" {
        let alpha = scene.form(form).map_err(scene_err)?;
        let p = pair_form(&alpha, vars, &x, s.counts, s.tol).map_err(core_err)?;
        t.kv(&format!("form {form}"), alpha.display(vars));
        if !p.closed {
            t.line("warning: form is not closed; the value depends on the representative");
        }
        t.kv("∫_X", fmt_sig(p.value));
        t.kv(
            "nodes",
            format!(
                "{} periodic, {} interval ({})",
                p.periodic_nodes,
                p.interval_nodes,
                if p.converged { "stable" } else { "not stable" }
            ),
        );
        return Ok(Report {
            text: t.finish(),
            json: json!({
                "command": "pair",
                "scene": scene.name,
                "patch": x.name(),
                "form": form,
                "closed": p.closed,
                "value": round_sig(p.value),
                "previous": round_sig(p.previous),
                "converged": p.converged,
            }),
            exit: if p.converged {
                Exit::Holds
            } else {
                Exit::Inconclusive
            },
            raw: false,
        });
    }
    let (name, mu) = pick_density(scene, &pi, density)?;
    t.kv(
        "density",
        format!("{name} = {}", mu.top_form().display(vars)),
    );
    match hnpt_certificate(&pi, &mu, vars, &x, s.counts, s.tol) {
        Ok(c) => {
            t.kv("form", format!("ι_(π^{}) μ", c.q));
            t.kv("orientation factor", sign(c.orientation));
            t.kv("min integrand", fmt_sig(c.min_integrand));
            t.kv(
                "∫_X",
                format!(
                    "{} ({})",
                    fmt_sig(c.integral),
                    if c.converged { "stable" } else { "not stable" }
                ),
            );
            t.kv(
                "verdict",
                if c.nontrivial {
                    "positive pairing: [X] ≠ 0"
                } else {
                    "pairing not certified positive"
                },
            );
            Ok(Report {
                text: t.finish(),
                json: json!({
                    "command": "pair",
                    "scene": scene.name,
                    "patch": x.name(),
                    "form": "auto",
                    "density": name,
                    "q": c.q,
                    "orientation": c.orientation,
                    "integral": round_sig(c.integral),
                    "previous": round_sig(c.previous),
                    "converged": c.converged,
                    "min_integrand": round_sig(c.min_integrand),
                    "all_positive": c.all_positive,
                    "nontrivial": c.nontrivial,
                }),
                exit: if c.nontrivial {
                    Exit::Holds
                } else {
                    Exit::Inconclusive
                },
                raw: false,
            })
        }
        Err(HnptError::Patch(e)) => Err(core_err(e)),
        Err(e) => {
            t.kv("precondition failed", e.to_string());
            t.kv("verdict", "no certificate");
            Ok(Report {
                text: t.finish(),
                json: json!({
                    "command": "pair",
                    "scene": scene.name,
                    "patch": x.name(),
                    "form": "auto",
                    "density": name,
                    "precondition_failed": e.to_string(),
                }),
                exit: Exit::Fails,
                raw: false,
            })
        }
    }
}

fn lie3_lines(t: &mut Text, r: &Lie3Report) {
    if let Some(m) = &r.matrix {
        t.kv("A", format!("[[{}, {}], [{}, {}]]", m[0], m[1], m[2], m[3]));
    }
    if let Some(n) = &r.name {
        t.kv("algebra", n);
    }
    if let (Some(tr), Some(det)) = (&r.trace, &r.det) {
        t.kv("tr", tr);
        t.kv("det", det);
    }
    if let Some(e) = &r.eigenvalues {
        t.kv("eigenvalues", e.display());
    }
    if r.semisimple {
        t.kv("type", "semisimple");
    }
    t.kv("criterion", &r.criterion);
    t.kv("transverse circle", yes_no(r.circle_exists));
    if let Some(c) = &r.circle {
        let kind = if c.unit {
            "unit circle"
        } else {
            "conjugated circle"
        };
        t.kv(
            "emitted circle",
            format!("{kind} ({}, {}, {})", c.map[0], c.map[1], c.map[2]),
        );
        t.kv(
            "transversality check",
            if c.transversal && c.sign_constant {
                format!(
                    "transversal, sign {}, min |det| {}",
                    sign(c.sign),
                    fmt_sig(c.min_abs)
                )
            } else {
                format!("fails, min |det| {}", fmt_sig(c.min_abs))
            },
        );
    }
    t.kv("unimodular", yes_no(r.unimodular));
}

pub fn classify(
    matrix: Option<&str>,
    name: Option<&str>,
    s: &Settings,
) -> Result<Report, CliError> {
    let input = match (matrix, name) {
        (Some(m), None) => {
            let v: Vec<Rational> = m
                .split(',')
                .map(|x| {
                    parse_rational(x)
                        .ok_or_else(|| CliError::Input(format!("bad matrix entry `{x}`")))
                })
                .collect::<Result<_, _>>()?;
            if v.len() != 4 {
                return Err(CliError::Input(format!(
                    "--matrix needs 4 entries, got {}",
                    v.len()
                )));
            }
            Lie3Input::Matrix([[v[0].clone(), v[1].clone()], [v[2].clone(), v[3].clone()]])
        }
        (None, Some(n)) => {
            if !matches!(n, "so3" | "sl2") && named_matrix(n).is_none() {
                return Err(CliError::Input(format!("unknown Lie algebra `{n}`")));
            }
            Lie3Input::Named(n.to_string())
        }
        _ => {
            return Err(CliError::Input(
                "give exactly one of --matrix or --name".into(),
            ))
        }
    };
    let r = classify_lie3(&input, s.counts.periodic, s.tol).map_err(core_err)?;
    let mut t = Text::default();
    lie3_lines(&mut t, &r);
    let json = serde_json::to_value(&r).expect("serializable");
    Ok(Report {
        text: t.finish(),
        json: json!({"command": "classify-lie3", "report": json}),
        exit: Exit::Holds,
        raw: false,
    })
}

pub fn scenes(dump: Option<&str>) -> Result<Report, CliError> {
    let all = builtin_scenes();
    if let Some(name) = dump {
        let scene = all
            .into_iter()
            .find(|s| s.name == name)
            .ok_or_else(|| CliError::SceneNotFound(name.to_string()))?;
        return Ok(Report {
            text: String::new(),
            json: serde_json::to_value(&scene).expect("scene JSON"),
            exit: Exit::Holds,
            raw: true,
        });
    }
    let mut t = Text::default();
    let width = all.iter().map(|s| s.name.len()).max().unwrap_or(0);
    for s in &all {
        t.line(format!("{:width$}  {}", s.name, s.description));
    }
    let names: Vec<&str> = all.iter().map(|s| s.name.as_str()).collect();
    Ok(Report {
        text: t.finish(),
        json: json!({"command": "scenes", "scenes": names}),
        exit: Exit::Holds,
        raw: false,
    })
}

fn report_text(scene: &Scene, a: &SceneAnalysis) -> String {
    let vars = &scene.chart.coords;
    let mut t = Text::default();
    t.line(format!("# HNPT report: {}", scene.name));
    if !scene.description.is_empty() {
        t.line(&scene.description);
    }
    t.kv("chart", format!("({})", vars.join(", ")));
    if !scene.sources.is_empty() {
        t.kv("sources", scene.sources.join(", "));
    }
    if !scene.annotations.is_empty() {
        t.kv("annotations", scene.annotations.join(", "));
    }

    if let (Some(j), Ok(Some(b))) = (&a.jacobi, scene.bivector()) {
        t.section("Poisson structure");
        t.kv("π", b.display(vars));
        match &j.witness {
            None => t.line("[π,π] = 0"),
            Some(w) => t.line(format!("not Poisson: {w}")),
        };
    }

    if !a.densities.is_empty() || a.solver.is_some() {
        t.section("Invariant densities");
        for d in &a.densities {
            let chain: Vec<String> = d
                .chain
                .iter()
                .map(|(k, c)| format!("k={k} {}", if *c { "closed" } else { "open" }))
                .collect();
            t.line(format!(
                "{} = ({}) vol: d ι_π μ = {}; chain [{}]; spinor check {}",
                d.name,
                d.coefficient,
                d.residual,
                chain.join(", "),
                if d.dirac_closed { "closed" } else { "open" }
            ));
        }
        if let Some(sv) = &a.solver {
            let status = if sv.constant_in_span {
                "constant density invariant".to_string()
            } else if sv.basis.is_empty() {
                format!("no invariant density up to degree {}", sv.degree)
            } else {
                "no constant density in span".to_string()
            };
            t.line(format!(
                "solver (degree ≤ {}): {{{}}}; {status}",
                sv.degree,
                sv.basis.join(", ")
            ));
        }
    }

    if let Some(b) = &a.book {
        t.section("Book structure");
        lie3_lines(&mut t, b);
    }

    if let Some(sp) = &a.sphere {
        t.section("Lie-Poisson sphere");
        t.kv(
            "Casimir",
            format!(
                "{} ({})",
                scene.casimir.clone().unwrap_or_default(),
                if sp.casimir {
                    "verified"
                } else {
                    "not a Casimir"
                }
            ),
        );
        t.kv("ι_π ι_E μ", &sp.h);
        t.kv("d(ι_π ι_E μ) ∧ dC = 0", yes_no(sp.dh_wedge_dc_zero));
    }

    if !a.patches.is_empty() {
        t.section("Patches");
        for p in &a.patches {
            let mut parts = vec![format!("dim {}", p.dim)];
            if let Some(c) = p.codim {
                parts.push(format!("codim {c}"));
            }
            match (p.transversal, p.sign_constant) {
                (Some(true), Some(true)) => {
                    parts.push(format!("transversal, sign {}", sign(p.sign.unwrap_or(0))))
                }
                (Some(true), Some(false)) => parts.push("determinant changes sign".into()),
                (Some(false), _) => parts.push("not transversal".into()),
                _ => {}
            }
            if let Some(m) = p.min_abs {
                parts.push(format!("min |det| {}", fmt_sig(m)));
            }
            if let Some(c) = p.coorientation {
                parts.push(format!("coorientation {}", sign(c)));
            }
            t.line(format!("{}: {}", p.name, parts.join(", ")));
            if let Some(c) = &p.certificate {
                t.line(format!(
                    "  pairing with ι_(π^{}) μ: {} (orientation {}, min integrand {}, {})",
                    c.q,
                    fmt_sig(c.integral),
                    sign(c.orientation),
                    fmt_sig(c.min_integrand),
                    if c.converged { "stable" } else { "not stable" }
                ));
            }
            if let Some(n) = &p.note {
                t.line(format!("  note: {n}"));
            }
        }
    }

    if let Some(l) = &a.log_symplectic {
        t.section("Log-symplectic locus");
        t.kv("top coefficient f", &l.f);
        match &l.affine_coordinate {
            Some(c) => t.kv("df", format!("∂f/∂{c} is a nonzero constant")),
            None => t.kv("df", "no affine certificate"),
        };
        t.kv(
            "log-symplectic",
            if l.certified {
                "certified"
            } else {
                "not certified"
            },
        );
        for w in &l.witnesses {
            t.line(format!(
                "witness {}: f = {}, {}",
                point(&w.point),
                fmt_sig(w.value),
                w.kind
            ));
        }
    }

    if let Some(d) = &a.deck {
        t.section("Deck transformation");
        t.kv("preserves π", yes_no(d.preserves_pi));
        t.kv("involution", yes_no(d.involution));
        t.kv("det Dφ", &d.jacobian_det);
        t.kv("Euler-equivariant", yes_no(d.euler_equivariant));
        t.kv(
            "reverses sphere orientation",
            yes_no(d.reverses_sphere_orientation),
        );
    }

    if let Some(f) = &a.fiber {
        t.section("Fiber integration");
        t.kv("density", &f.form);
        for (p, v) in &f.pushed {
            t.line(format!("f_% μ at {}: {v}", point(p)));
        }
        t.kv("max |d f_% μ|", fmt_sig(f.chain_residual));
    }

    if let Some(fb) = &a.flat_bundle {
        t.section("Flat bundle");
        t.kv("genus", fb.genus.to_string());
        t.kv("Chern pairing", fb.chern.to_string());
        t.kv("bound 2(g−1)", fb.bound.to_string());
        t.line(&fb.message);
    }

    t.section("Verdicts");
    for v in &a.verdicts {
        let subject = match &v.subject {
            Some(s) => format!("{} ({s})", v.property),
            None => v.property.to_string(),
        };
        match (&v.rule, &v.citation) {
            (Some(r), Some(c)) => {
                t.line(format!("{subject}: {} [{r}]", v.status));
                t.line(format!("  {c}"));
                if !v.witnesses.is_empty() {
                    t.line(format!("  witnesses: {}", v.witnesses.join("; ")));
                }
                if !v.supporting.is_empty() {
                    t.line(format!("  also: {}", v.supporting.join(", ")));
                }
            }
            _ => {
                t.line(format!("{subject}: {}", v.status));
            }
        }
    }
    if !a.superseded.is_empty() {
        t.line(format!(
            "superseded annotations: {}",
            a.superseded.join(", ")
        ));
    }
    t.line("");
    t.kv("Summary", &a.summary);
    t.finish()
}

fn report_exit(a: &SceneAnalysis) -> Exit {
    let statuses: Vec<Status> = a.verdicts.iter().map(|v| v.status).collect();
    if statuses.contains(&Status::Fails) {
        Exit::Fails
    } else if statuses.contains(&Status::Holds) {
        Exit::Holds
    } else {
        Exit::Inconclusive
    }
}

pub fn report(scene: &Scene, s: &Settings) -> Result<Report, CliError> {
    let mut opts = AnalysisOptions {
        tol: s.tol,
        counts: s.counts,
        ..AnalysisOptions::default()
    };
    if let Some(tol) = scene.tolerances.as_ref().and_then(|t| t.zero) {
        opts.tol = tol;
    }
    let a = analyze_scene(scene, &opts).map_err(|e| match e {
        CatalogError::Contradiction { .. } => CliError::Contradiction(e.to_string()),
        CatalogError::Scene(e) => scene_err(e),
        other => CliError::Input(other.to_string()),
    })?;
    let exit = report_exit(&a);
    let mut json = serde_json::to_value(&a).expect("analysis JSON");
    json["command"] = json!("report");
    json["exit_code"] = json!(exit as i32);
    Ok(Report {
        text: report_text(scene, &a),
        json,
        exit,
        raw: false,
    })
}
