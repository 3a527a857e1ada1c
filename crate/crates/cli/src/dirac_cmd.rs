use serde_json::{json, Value};

use ptk_core::dirac::{
    backward_pullback, cospinor_line, forward_pushforward, spinor_line, transversal_conditions,
    Ext, LinearDirac,
};
use ptk_core::linalg::{self, Matrix};
use ptk_core::mvcalc::{fmt_rational, parse_rational};

use crate::args::DiracCommand;
use crate::render::{yes_no, Text};
use crate::{CliError, Exit, Report};

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// Rows separated by `;`, entries by `,`.
pub fn parse_matrix(s: &str) -> Result<Matrix, CliError> {
    let rows: Matrix = s
        .split(';')
        .filter(|r| !r.trim().is_empty())
        .map(|r| {
            r.split(',')
                .map(|x| parse_rational(x).ok_or_else(|| bad(format!("bad matrix entry `{x}`"))))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(bad(format!("ragged matrix `{s}`")));
    }
    Ok(rows)
}

pub fn parse_lagrangian(spec: &str) -> Result<LinearDirac, CliError> {
    let (kind, body) = spec
        .split_once(':')
        .ok_or_else(|| bad(format!("expected KIND:VALUE, got `{spec}`")))?;
    let dirac =
        |r: Result<LinearDirac, ptk_core::dirac::DiracError>| r.map_err(|e| bad(e.to_string()));
    let dim = || -> Result<usize, CliError> {
        body.trim()
            .parse()
            .map_err(|_| bad(format!("bad dimension `{body}`")))
    };
    match kind {
        "tangent" => Ok(LinearDirac::tangent(dim()?)),
        "cotangent" => Ok(LinearDirac::cotangent(dim()?)),
        "bivector" => dirac(LinearDirac::graph_bivector(&parse_matrix(body)?)),
        "form" => dirac(LinearDirac::graph_form(&parse_matrix(body)?)),
        "rows" => {
            let m = parse_matrix(body)?;
            let cols = m.first().map_or(0, Vec::len);
            if cols % 2 != 0 {
                return Err(bad("rows need an even number of columns"));
            }
            dirac(LinearDirac::new(cols / 2, m))
        }
        _ => Err(bad(format!("unknown Lagrangian kind `{kind}`"))),
    }
}

fn matrix_text(m: &Matrix) -> String {
    m.iter()
        .map(|r| r.iter().map(fmt_rational).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

/// `(U | Ξ)` rows; the form `U^{-1}Ξ` when `U` is invertible.
fn as_form(l: &LinearDirac) -> Option<Matrix> {
    let n = l.dim();
    let u: Matrix = l.rows().iter().map(|r| r[..n].to_vec()).collect();
    let xi: Matrix = l.rows().iter().map(|r| r[n..].to_vec()).collect();
    Some(linalg::mat_mul(&linalg::inverse(&u)?, &xi))
}

/// The bivector `Ξ^{-1}U` when `Ξ` is invertible.
fn as_bivector(l: &LinearDirac) -> Option<Matrix> {
    let n = l.dim();
    let u: Matrix = l.rows().iter().map(|r| r[..n].to_vec()).collect();
    let xi: Matrix = l.rows().iter().map(|r| r[n..].to_vec()).collect();
    Some(linalg::mat_mul(&linalg::inverse(&xi)?, &u))
}

fn describe(t: &mut Text, label: &str, l: &LinearDirac) -> Value {
    t.kv(label, matrix_text(l.rows()));
    let form = as_form(l).map(|m| matrix_text(&m));
    let bivector = as_bivector(l).map(|m| matrix_text(&m));
    if let Some(f) = &form {
        t.kv(&format!("{label} = graph of form"), f);
    }
    if let Some(b) = &bivector {
        t.kv(&format!("{label} = graph of bivector"), b);
    }
    json!({"rows": matrix_text(l.rows()), "form": form, "bivector": bivector})
}

fn ext(e: &Ext, upper: bool) -> String {
    e.display(upper)
}

fn report(t: Text, json: Value, exit: Exit) -> Result<Report, CliError> {
    Ok(Report {
        text: t.finish(),
        json,
        exit,
        raw: false,
    })
}

pub fn run(cmd: &DiracCommand) -> Result<Report, CliError> {
    let derr = |e: ptk_core::dirac::DiracError| bad(e.to_string());
    let mut t = Text::default();
    match cmd {
        DiracCommand::Spinor { lagrangian } => {
            let l = parse_lagrangian(lagrangian)?;
            let phi = spinor_line(&l).map_err(derr)?;
            t.kv("spinor line", ext(&phi, true));
            report(
                t,
                json!({"command": "dirac spinor", "spinor": ext(&phi, true)}),
                Exit::Holds,
            )
        }
        DiracCommand::Cospinor { lagrangian } => {
            let l = parse_lagrangian(lagrangian)?;
            let w = cospinor_line(&l).map_err(derr)?;
            t.kv("co-spinor line", ext(&w, false));
            report(
                t,
                json!({"command": "dirac cospinor", "cospinor": ext(&w, false)}),
                Exit::Holds,
            )
        }
        DiracCommand::Pullback { lagrangian, map } => {
            let l = parse_lagrangian(lagrangian)?;
            let f = parse_matrix(map)?;
            let p = backward_pullback(&l, &f).map_err(derr)?;
            let result = describe(&mut t, "f^!(L)", &p.result);
            t.kv("transverse", yes_no(p.transverse));
            if let Some(s) = p.spinor_relation {
                t.kv("f^* spans the pulled-back spinor line", yes_no(s));
            }
            report(
                t,
                json!({
                    "command": "dirac pullback",
                    "result": result,
                    "transverse": p.transverse,
                    "spinor_relation": p.spinor_relation,
                }),
                Exit::Holds,
            )
        }
        DiracCommand::Pushforward { lagrangian, map } => {
            let l = parse_lagrangian(lagrangian)?;
            let f = parse_matrix(map)?;
            let p = forward_pushforward(&l, &f).map_err(derr)?;
            let result = describe(&mut t, "f_!(L)", &p.result);
            t.kv("strong", yes_no(p.strong));
            t.kv("surjective", yes_no(p.surjective));
            if let Some(c) = p.cospinor_transport {
                t.kv("f_* maps co-spinor lines", yes_no(c));
            }
            let eq7 = p.eq7.as_ref().map(|e| {
                t.kv("v (kernel volume)", ext(&e.v, false));
                t.kv("ψ", e.psi.as_ref().map_or("none".into(), |p| ext(p, true)));
                t.kv(
                    "ψ spans the target spinor line",
                    yes_no(e.psi_spans_target_spinor),
                );
                json!({
                    "v": ext(&e.v, false),
                    "u": ext(&e.u, false),
                    "lambda": fmt_rational(&e.lambda),
                    "psi": e.psi.as_ref().map(|p| ext(p, true)),
                    "psi_spans_target_spinor": e.psi_spans_target_spinor,
                })
            });
            report(
                t,
                json!({
                    "command": "dirac pushforward",
                    "result": result,
                    "strong": p.strong,
                    "surjective": p.surjective,
                    "cospinor_transport": p.cospinor_transport,
                    "eq7": eq7,
                }),
                Exit::Holds,
            )
        }
        DiracCommand::Conditions {
            lagrangian,
            subspace,
        } => {
            let l = parse_lagrangian(lagrangian)?;
            let x = parse_matrix(subspace)?;
            let flags = transversal_conditions(&l, &x).map_err(derr)?;
            t.kv("(X ⊕ ann X) ∩ L = 0", yes_no(flags.b));
            t.kv("top part of i^*φ nonzero", yes_no(flags.c));
            t.kv("co-spinor projects to ∧^top(V/X)", yes_no(flags.d));
            t.kv("conditions agree", yes_no(flags.agree()));
            let exit = if flags.b { Exit::Holds } else { Exit::Fails };
            report(
                t,
                json!({
                    "command": "dirac conditions",
                    "b": flags.b,
                    "c": flags.c,
                    "d": flags.d,
                    "agree": flags.agree(),
                }),
                exit,
            )
        }
    }
}
