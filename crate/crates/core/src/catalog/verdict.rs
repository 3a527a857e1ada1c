//! Forward-chaining HNPT rules. Computed facts take precedence; annotations
//! only fill premises no check can decide.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::CatalogError;

pub const THEOREM_1: &str = "A unimodular Poisson manifold has the HNPT property.";
pub const THEOREM_2: &str = "Let f : (P, π_P) → (M, π_M) be a proper Poisson map. If (P, π_P) has the HNPT property, then the homology class of every compact Poisson transversal X ⊂ M which meets f(P) is nontrivial.";
pub const COROLLARY_1: &str = "A Poisson manifold which admits a surjective proper symplectic realization has the HNPT property.";
pub const COROLLARY_2: &str = "A regular, corank-one Poisson structure on a compact, oriented manifold M with H_1(M, ℝ) = 0 does not admit proper symplectic realizations.";
pub const COROLLARY_3: &str = "Let X be a compact Poisson transversal in a Poisson manifold (M, π). If X meets a closed, embedded, unimodular Poisson submanifold, then [X] ≠ 0 in H_•(M, 𝔬_M).";
pub const THEOREM_3: &str = "A Poisson manifold with closed leaves has the HNPT property.";
pub const THEOREM_4: &str = "Log-symplectic manifolds have the weak HNPT property.";
pub const THEOREM_5: &str = "A compact, connected, nonempty Poisson transversal of an orientable log-symplectic manifold has nontrivial homology class.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Hnpt,
    WeakHnpt,
    TransversalNontrivial,
    ProperSymplecticRealization,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Hnpt => "HNPT",
            Property::WeakHnpt => "weak HNPT",
            Property::TransversalNontrivial => "transversal nontrivial",
            Property::ProperSymplecticRealization => "proper symplectic realization",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub property: Property,
    pub subject: Option<String>,
    pub status: Status,
    pub rule: Option<String>,
    /// Short reference such as "Theorem 4" or "Example 7".
    pub reference: Option<String>,
    pub citation: Option<String>,
    pub witnesses: Vec<String>,
    /// Further rules reaching the same conclusion.
    pub supporting: Vec<String>,
}

impl Verdict {
    /// Theorem or corollary label, shown in summaries.
    pub fn theorem_label(&self) -> Option<&str> {
        self.reference
            .as_deref()
            .filter(|r| r.starts_with("Theorem") || r.starts_with("Corollary"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PatchFact {
    pub name: String,
    pub dim: usize,
    pub is_point: bool,
    /// Transversal with sign-constant determinant.
    pub transversal: bool,
    pub coorientation: Option<i32>,
    pub pairing_positive: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Facts {
    pub annotations: BTreeSet<String>,
    /// A Poisson structure was supplied and verified.
    pub poisson: bool,
    /// Witness for an invariant positive density.
    pub unimodular: Option<String>,
    pub patches: Vec<PatchFact>,
    /// `None` when not computable in this chart.
    pub log_symplectic: Option<bool>,
    pub deck_reverses_orientation: Option<bool>,
    pub flat_bundle_weak_fails: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictSet {
    pub verdicts: Vec<Verdict>,
    /// Annotations overridden by a computed fact.
    pub superseded: Vec<String>,
}

struct Conclusion {
    property: Property,
    subject: Option<String>,
    status: Status,
    rule: &'static str,
    reference: &'static str,
    citation: String,
    witnesses: Vec<String>,
}

fn cite(reference: &str, text: &str) -> String {
    format!("{reference}: {text}")
}

impl Facts {
    fn has(&self, a: &str) -> bool {
        self.annotations.contains(a)
    }

    fn log_symplectic(&self) -> bool {
        self.log_symplectic
            .unwrap_or_else(|| self.has("is_log_symplectic"))
    }
}

fn base_conclusions(f: &Facts) -> Vec<Conclusion> {
    let mut out = Vec::new();
    let mut push = |property,
                    subject: Option<String>,
                    status,
                    rule,
                    reference,
                    text: &str,
                    witnesses: Vec<String>| {
        out.push(Conclusion {
            property,
            subject,
            status,
            rule,
            reference,
            citation: cite(reference, text),
            witnesses,
        })
    };
    use Property::*;
    use Status::*;

    if let Some(w) = &f.unimodular {
        push(
            Hnpt,
            None,
            Holds,
            "unimodular-certificate",
            "Theorem 1",
            THEOREM_1,
            vec![w.clone()],
        );
    }
    if f.has("leaves_closed") {
        push(
            Hnpt,
            None,
            Holds,
            "closed-leaves",
            "Theorem 3",
            THEOREM_3,
            vec!["annotation leaves_closed".into()],
        );
    }
    if f.has("surjective_proper_symplectic_realization") {
        push(
            Hnpt,
            None,
            Holds,
            "surjective-proper-symplectic-realization",
            "Corollary 1",
            COROLLARY_1,
            vec!["annotation surjective_proper_symplectic_realization".into()],
        );
    }

    for p in f.patches.iter().filter(|p| p.transversal) {
        let ann = format!("H{}_vanishes", p.dim);
        if f.has(&ann) {
            let w = vec![
                format!("transversal patch {}", p.name),
                format!("annotation {ann}"),
            ];
            let text = format!("[X] ∈ H_{}(M, 𝔬_M) = 0", p.dim);
            push(
                Hnpt,
                None,
                Fails,
                "trivial-homology",
                "Example 1",
                &text,
                w.clone(),
            );
            push(
                TransversalNontrivial,
                Some(p.name.clone()),
                Fails,
                "trivial-homology",
                "Example 1",
                &text,
                w,
            );
        }
    }
    if !f.poisson && f.has("transversal_circles_exist") && f.has("H1_vanishes") && f.has("compact")
    {
        push(
            Hnpt,
            None,
            Fails,
            "trivial-homology-declared",
            "Example 2",
            "[X] ∈ H_1(M, 𝔬_M) = 0",
            vec!["annotations transversal_circles_exist, H1_vanishes, compact".into()],
        );
    }
    if f.has("connected") && f.has("orientable") {
        let points: Vec<&PatchFact> = f
            .patches
            .iter()
            .filter(|p| p.is_point && p.transversal && p.coorientation.is_some())
            .collect();
        'outer: for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                if a.coorientation != b.coorientation {
                    let w = vec![
                        format!(
                            "coorientation({}) = {:+}",
                            a.name,
                            a.coorientation.unwrap_or(0)
                        ),
                        format!(
                            "coorientation({}) = {:+}",
                            b.name,
                            b.coorientation.unwrap_or(0)
                        ),
                    ];
                    let text = format!("[X] = [{}] − [{}] = 0", a.name, b.name);
                    push(
                        Hnpt,
                        None,
                        Fails,
                        "opposite-coorientations",
                        "Example 7",
                        &text,
                        w.clone(),
                    );
                    push(
                        TransversalNontrivial,
                        Some(format!("{} ∪ {}", a.name, b.name)),
                        Fails,
                        "opposite-coorientations",
                        "Example 7",
                        &text,
                        w,
                    );
                    break 'outer;
                }
            }
        }
    }
    if f.deck_reverses_orientation == Some(true) && f.has("connected") && f.log_symplectic() {
        push(
            Hnpt,
            None,
            Fails,
            "anti-invariant-deck",
            "Example 8",
            "H₀(ℙ², 𝔬_{ℙ²}) = 0",
            vec!["deck map preserves π and reverses orientation".into()],
        );
    }

    if f.log_symplectic() {
        let w = match f.log_symplectic {
            Some(_) => "computed: top power transverse to the zero section",
            None => "annotation is_log_symplectic",
        };
        push(
            WeakHnpt,
            None,
            Holds,
            "log-symplectic",
            "Theorem 4",
            THEOREM_4,
            vec![w.into()],
        );
    }
    if f.has("saturation_classes_nontrivial") {
        push(
            WeakHnpt,
            None,
            Holds,
            "saturation-classes",
            "Definition 3",
            "[X] ≠ 0 in H_•(St(X), 𝔬_{St(X)})",
            vec!["annotation saturation_classes_nontrivial".into()],
        );
    }
    if f.flat_bundle_weak_fails == Some(true) {
        push(
            WeakHnpt,
            None,
            Fails,
            "flat-bundle",
            "Example 3",
            "0 < |⟨c, [Σ]⟩| ≤ 2(g−1)",
            vec!["flat bundle Chern pairing within bounds".into()],
        );
    }

    for p in &f.patches {
        if p.pairing_positive {
            push(
                TransversalNontrivial,
                Some(p.name.clone()),
                Holds,
                "positive-pairing",
                "Theorem 1",
                THEOREM_1,
                vec![format!("∫ ι_(π^q) μ > 0 on {}", p.name)],
            );
        }
        if !p.transversal {
            continue;
        }
        if f.log_symplectic() && f.has("orientable") {
            push(
                TransversalNontrivial,
                Some(p.name.clone()),
                Holds,
                "log-symplectic-transversal",
                "Theorem 5",
                THEOREM_5,
                vec![format!("connected compact transversal {}", p.name)],
            );
        }
        if f.has("meets_closed_unimodular_submanifold") {
            push(
                TransversalNontrivial,
                Some(p.name.clone()),
                Holds,
                "meets-unimodular-submanifold",
                "Corollary 3",
                COROLLARY_3,
                vec!["annotation meets_closed_unimodular_submanifold".into()],
            );
        }
        if f.has("meets_image_of_proper_hnpt_map") {
            push(
                TransversalNontrivial,
                Some(p.name.clone()),
                Holds,
                "proper-map-image",
                "Theorem 2",
                THEOREM_2,
                vec!["annotation meets_image_of_proper_hnpt_map".into()],
            );
        }
    }

    if ["regular_corank_one", "compact", "orientable", "H1_vanishes"]
        .iter()
        .all(|a| f.has(a))
    {
        push(
            ProperSymplecticRealization,
            None,
            Fails,
            "corank-one-no-realization",
            "Corollary 2",
            COROLLARY_2,
            vec!["annotations regular_corank_one, compact, orientable, H1_vanishes".into()],
        );
    }
    out
}

fn describe(c: &Conclusion) -> String {
    format!("{} ({}; {})", c.rule, c.reference, c.witnesses.join(", "))
}

/// Runs the rule table. Each (property, subject) gets one verdict: the first
/// rule in table order decides, later agreeing rules are listed as support,
/// and disagreeing rules abort with a contradiction.
pub fn verdict_engine(facts: &Facts) -> Result<VerdictSet, CatalogError> {
    let conclusions = base_conclusions(facts);

    // HNPT ⇒ weak HNPT, and its contrapositive.
    let implied: Vec<Conclusion> = conclusions
        .iter()
        .filter(|c| c.subject.is_none())
        .filter_map(|c| match (c.property, c.status) {
            (Property::Hnpt, Status::Holds) => Some((Property::WeakHnpt, c)),
            (Property::WeakHnpt, Status::Fails) => Some((Property::Hnpt, c)),
            _ => None,
        })
        .map(|(property, c)| Conclusion {
            property,
            subject: None,
            status: c.status,
            rule: c.rule,
            reference: c.reference,
            citation: c.citation.clone(),
            witnesses: c.witnesses.clone(),
        })
        .collect();
    // implied conclusions rank first so a theorem-level HNPT verdict also
    // labels weak HNPT
    let conclusions: Vec<Conclusion> = implied.into_iter().chain(conclusions).collect();

    let mut keys: Vec<(Property, Option<String>)> = Vec::new();
    for c in &conclusions {
        let k = (c.property, c.subject.clone());
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    for p in [Property::Hnpt, Property::WeakHnpt] {
        if !keys.contains(&(p, None)) {
            keys.push((p, None));
        }
    }
    keys.sort();

    let mut verdicts = Vec::new();
    for (property, subject) in keys {
        let group: Vec<&Conclusion> = conclusions
            .iter()
            .filter(|c| c.property == property && c.subject == subject)
            .collect();
        let holds = group.iter().find(|c| c.status == Status::Holds);
        let fails = group.iter().find(|c| c.status == Status::Fails);
        if let (Some(h), Some(x)) = (holds, fails) {
            let what = match &subject {
                Some(s) => format!("{property} of {s}"),
                None => property.to_string(),
            };
            return Err(CatalogError::Contradiction {
                property: what,
                holds: describe(h),
                fails: describe(x),
            });
        }
        let v = match group.first() {
            Some(first) => Verdict {
                property,
                subject,
                status: first.status,
                rule: Some(first.rule.to_string()),
                reference: Some(first.reference.to_string()),
                citation: Some(first.citation.clone()),
                witnesses: first.witnesses.clone(),
                supporting: group[1..]
                    .iter()
                    .map(|c| format!("{} ({})", c.rule, c.reference))
                    .filter(|s| s != &format!("{} ({})", first.rule, first.reference))
                    .collect(),
            },
            None => Verdict {
                property,
                subject,
                status: Status::Inconclusive,
                rule: None,
                reference: None,
                citation: None,
                witnesses: Vec::new(),
                supporting: Vec::new(),
            },
        };
        verdicts.push(v);
    }

    let mut superseded = Vec::new();
    if facts.log_symplectic.is_some() && facts.has("is_log_symplectic") {
        superseded.push("is_log_symplectic".to_string());
    }
    if facts.poisson && facts.has("transversal_circles_exist") {
        superseded.push("transversal_circles_exist".to_string());
    }
    Ok(VerdictSet {
        verdicts,
        superseded,
    })
}

/// `HNPT <status>[ (Theorem N)]; weak HNPT <status>[ (Theorem N)]`.
pub fn summary_line(verdicts: &[Verdict]) -> String {
    [Property::Hnpt, Property::WeakHnpt]
        .iter()
        .map(|p| {
            let v = verdicts
                .iter()
                .find(|v| v.property == *p && v.subject.is_none());
            match v {
                Some(v) => match v.theorem_label() {
                    Some(l) => format!("{p} {} ({l})", v.status),
                    None => format!("{p} {}", v.status),
                },
                None => format!("{p} inconclusive"),
            }
        })
        .collect::<Vec<_>>()
        .join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ann(list: &[&str]) -> BTreeSet<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn point(name: &str, sign: i32) -> PatchFact {
        PatchFact {
            name: name.into(),
            dim: 0,
            is_point: true,
            transversal: true,
            coorientation: Some(sign),
            pairing_positive: false,
        }
    }

    #[test]
    fn unimodular_gives_theorem_1() {
        let f = Facts {
            poisson: true,
            unimodular: Some("mu".into()),
            ..Default::default()
        };
        let v = verdict_engine(&f).unwrap();
        assert_eq!(
            summary_line(&v.verdicts),
            "HNPT holds (Theorem 1); weak HNPT holds (Theorem 1)"
        );
        assert!(v.verdicts[0]
            .citation
            .as_deref()
            .unwrap()
            .ends_with(THEOREM_1));
    }

    #[test]
    fn opposite_points_on_log_symplectic() {
        let f = Facts {
            annotations: ann(&["connected", "orientable"]),
            poisson: true,
            patches: vec![point("N", 1), point("S", -1)],
            log_symplectic: Some(true),
            ..Default::default()
        };
        let v = verdict_engine(&f).unwrap();
        assert_eq!(
            summary_line(&v.verdicts),
            "HNPT fails; weak HNPT holds (Theorem 4)"
        );
        let n: Vec<_> = v
            .verdicts
            .iter()
            .filter(|v| v.property == Property::TransversalNontrivial && v.status == Status::Holds)
            .collect();
        assert_eq!(n.len(), 2);
        assert_eq!(n[0].reference.as_deref(), Some("Theorem 5"));
    }

    #[test]
    fn contradiction_is_an_error() {
        let mut circle = point("circle", -1);
        circle.dim = 1;
        circle.is_point = false;
        let f = Facts {
            annotations: ann(&["H1_vanishes"]),
            poisson: true,
            unimodular: Some("mu".into()),
            patches: vec![circle],
            ..Default::default()
        };
        let err = verdict_engine(&f).unwrap_err().to_string();
        assert!(
            err.contains("unimodular-certificate") && err.contains("trivial-homology"),
            "{err}"
        );
    }

    #[test]
    fn annotations_do_not_override_computation() {
        let f = Facts {
            annotations: ann(&["is_log_symplectic"]),
            poisson: true,
            log_symplectic: Some(false),
            ..Default::default()
        };
        let v = verdict_engine(&f).unwrap();
        assert_eq!(
            summary_line(&v.verdicts),
            "HNPT inconclusive; weak HNPT inconclusive"
        );
        assert_eq!(v.superseded, vec!["is_log_symplectic"]);
    }

    #[test]
    fn deterministic() {
        let f = Facts {
            annotations: ann(&[
                "leaves_closed",
                "compact",
                "regular_corank_one",
                "orientable",
                "H1_vanishes",
            ]),
            ..Default::default()
        };
        assert_eq!(verdict_engine(&f).unwrap(), verdict_engine(&f).unwrap());
    }
}
