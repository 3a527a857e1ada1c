//! The built-in scene list. Order and content are fixed; golden reports
//! depend on both.

use crate::scene::{
    BivectorTerm, Chart, DensitySpec, FiberDecl, FlatBundleDecl, FormSpec, ParamDecl, PatchSpec,
    PoissonSpec, Scene,
};

struct Builder(Scene);

impl Builder {
    fn new(name: &str, description: &str, coords: &[&str]) -> Self {
        Builder(Scene {
            name: name.into(),
            description: description.into(),
            chart: Chart {
                dim: coords.len(),
                coords: coords.iter().map(|s| s.to_string()).collect(),
            },
            poisson: None,
            densities: Vec::new(),
            forms: Vec::new(),
            patches: Vec::new(),
            annotations: Vec::new(),
            sources: Vec::new(),
            book_matrix: None,
            casimir: None,
            deck_map: None,
            fiber: None,
            flat_bundle: None,
            witnesses: Vec::new(),
            tolerances: None,
        })
    }

    fn poisson(mut self, terms: &[([usize; 2], &str)]) -> Self {
        self.0.poisson = Some(PoissonSpec {
            terms: terms
                .iter()
                .map(|(i, c)| BivectorTerm {
                    indices: i.to_vec(),
                    coeff: c.to_string(),
                })
                .collect(),
        });
        self
    }

    fn density(mut self, name: &str, coeff: &str) -> Self {
        self.0.densities.push(DensitySpec {
            name: name.into(),
            coeff: coeff.into(),
        });
        self
    }

    fn form(mut self, name: &str, terms: &[(&[usize], &str)]) -> Self {
        self.0.forms.push(FormSpec {
            name: name.into(),
            terms: terms
                .iter()
                .map(|(i, c)| BivectorTerm {
                    indices: i.to_vec(),
                    coeff: c.to_string(),
                })
                .collect(),
        });
        self
    }

    fn circle(mut self, map: [&str; 3]) -> Self {
        self.0.patches.push(PatchSpec {
            name: "circle".into(),
            params: vec![ParamDecl {
                name: "t".into(),
                range: ["0".into(), "2pi".into()],
                periodic: true,
            }],
            map: map.iter().map(|s| s.to_string()).collect(),
        });
        self
    }

    fn point(mut self, name: &str, coords: &[&str]) -> Self {
        self.0.patches.push(PatchSpec {
            name: name.into(),
            params: Vec::new(),
            map: coords.iter().map(|s| s.to_string()).collect(),
        });
        self
    }

    fn annotate(mut self, list: &[&str]) -> Self {
        self.0
            .annotations
            .extend(list.iter().map(|s| s.to_string()));
        self
    }

    fn sources(mut self, list: &[&str]) -> Self {
        self.0.sources.extend(list.iter().map(|s| s.to_string()));
        self
    }

    fn book(mut self, a: [&str; 4]) -> Self {
        self.0.book_matrix = Some(a.map(String::from));
        self
    }

    fn done(self) -> Scene {
        self.0
    }
}

const XYZ: &[&str] = &["x", "y", "z"];

fn book(name: &str, description: &str, a: [&str; 4], xz: &str, yz: &str) -> Builder {
    Builder::new(name, description, XYZ)
        .poisson(&[([0, 2], xz), ([1, 2], yz)])
        .density("mu", "1")
        .circle(["cos(t)", "sin(t)", "0"])
        .book(a)
}

pub fn builtin_scenes() -> Vec<Scene> {
    vec![
        book(
            "book-Id",
            "Book Lie-Poisson structure of R^2 x_A R with A = Id",
            ["1", "0", "0", "1"],
            "x",
            "y",
        )
        .form("winding", &[(&[0], "-y"), (&[1], "x")])
        .annotate(&[
            "H1_vanishes",
            "connected",
            "orientable",
            "saturation_classes_nontrivial",
        ])
        .sources(&["Example 1", "Example 4"])
        .done(),
        book(
            "book-diag",
            "Book Lie-Poisson structure with A = diag(1, -1)",
            ["1", "0", "0", "-1"],
            "x",
            "-y",
        )
        .annotate(&["H1_vanishes", "connected", "orientable"])
        .sources(&["Example 1", "Example 4"])
        .done(),
        book(
            "book-rot",
            "Book Lie-Poisson structure with A = [[1, -1], [1, 1]]",
            ["1", "-1", "1", "1"],
            "x - y",
            "x + y",
        )
        .annotate(&[
            "H1_vanishes",
            "connected",
            "orientable",
            "saturation_classes_nontrivial",
        ])
        .sources(&["Example 1", "Example 4"])
        .done(),
        {
            let mut s = Builder::new("so3", "Lie-Poisson structure on so(3)*", XYZ)
                .poisson(&[([0, 1], "z"), ([0, 2], "-y"), ([1, 2], "x")])
                .density("mu", "1")
                .annotate(&["leaves_closed", "connected", "orientable"])
                .sources(&["Example 1", "Example 4", "Example 6"])
                .done();
            s.casimir = Some("x^2 + y^2 + z^2".into());
            s
        },
        Builder::new(
            "so3-sphere",
            "Unit Lie-Poisson sphere of so(3) in the cylinder chart (theta, z)",
            &["theta", "z"],
        )
        .poisson(&[([0, 1], "1")])
        .density("sigma", "1")
        .point("N", &["0", "1/2"])
        .point("S", &["0", "-1/2"])
        .annotate(&["leaves_closed", "compact", "connected", "orientable"])
        .sources(&["Example 6"])
        .done(),
        Builder::new("sl2", "Lie-Poisson structure on sl(2)*", XYZ)
            .poisson(&[([0, 1], "-z"), ([0, 2], "-y"), ([1, 2], "x")])
            .density("mu", "1")
            .annotate(&["connected", "orientable"])
            .sources(&["Example 1", "Example 4"])
            .done(),
        Builder::new(
            "heisenberg",
            "Lie-Poisson structure on the Heisenberg algebra dual",
            XYZ,
        )
        .poisson(&[([0, 1], "z")])
        .density("mu", "1")
        .annotate(&["connected", "orientable"])
        .sources(&["Example 4"])
        .done(),
        {
            let mut s = Builder::new(
                "s2-log",
                "Log-symplectic sphere z d/dz ^ d/dtheta in the cylinder chart (z, theta)",
                &["z", "theta"],
            )
            .poisson(&[([0, 1], "z")])
            .point("N", &["1/2", "0"])
            .point("S", &["-1/2", "0"])
            .annotate(&["compact", "connected", "orientable", "is_log_symplectic"])
            .sources(&["Example 7"])
            .done();
            s.witnesses = vec![vec![0.5, 0.0], vec![-0.5, 0.0], vec![0.0, 1.0]];
            s
        },
        {
            let mut s = Builder::new(
                "p2-log",
                "Projective plane as the antipodal quotient of z * pi_so3 on R^3",
                XYZ,
            )
            .poisson(&[([0, 1], "z^2"), ([0, 2], "-y*z"), ([1, 2], "x*z")])
            .annotate(&["compact", "connected", "is_log_symplectic"])
            .sources(&["Example 8"])
            .done();
            s.deck_map = Some(vec!["-x".into(), "-y".into(), "-z".into()]);
            s
        },
        Builder::new("symplectic-r2", "Standard symplectic plane", &["x", "y"])
            .poisson(&[([0, 1], "1")])
            .density("mu", "1")
            .point("p", &["0", "0"])
            .annotate(&["connected", "orientable"])
            .done(),
        Builder::new(
            "symplectic-r4",
            "Standard symplectic R^4",
            &["x1", "y1", "x2", "y2"],
        )
        .poisson(&[([0, 1], "1"), ([2, 3], "1")])
        .density("mu", "1")
        .point("p", &["0", "0", "0", "0"])
        .annotate(&["connected", "orientable"])
        .done(),
        {
            let mut s = Builder::new(
                "product",
                "Product of the symplectic plane with a circle, theta periodic",
                &["x", "y", "theta"],
            )
            .poisson(&[([0, 1], "1")])
            .density("mu", "1")
            .annotate(&["leaves_closed", "connected", "orientable"])
            .done();
            s.fiber = Some(FiberDecl {
                base_dim: 2,
                ranges: vec![["0".into(), "2pi".into()]],
                periodic: vec![true],
            });
            s
        },
        Builder::new(
            "reeb",
            "Reeb foliation of the three-sphere (declared facts only)",
            XYZ,
        )
        .annotate(&[
            "compact",
            "connected",
            "orientable",
            "H1_vanishes",
            "transversal_circles_exist",
            "regular_corank_one",
            "saturation_classes_nontrivial",
        ])
        .sources(&["Example 2"])
        .done(),
        {
            let mut s = Builder::new(
                "flat-bundle",
                "Principal circle bundle over a genus-2 surface with a flat connection",
                &["u", "v", "phi"],
            )
            .annotate(&["compact", "connected", "orientable"])
            .sources(&["Example 3"])
            .done();
            s.flat_bundle = Some(FlatBundleDecl { genus: 2, chern: 1 });
            s
        },
    ]
}

pub fn builtin_scene(name: &str) -> Option<Scene> {
    builtin_scenes().into_iter().find(|s| s.name == name)
}
