use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "ptk", version, about = "Poisson transversal homology checks")]
pub struct Cli {
    /// Numerical tolerance for sampled checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Periodic quadrature nodes per direction (interval nodes are a quarter).
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Emit only the machine-readable JSON block.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check [π,π] = 0.
    Verify(SceneArg),
    /// Test a density for invariance or solve for invariant densities.
    Unimodular {
        #[command(flatten)]
        scene: SceneArg,
        /// Polynomial degree bound for the density solver.
        #[arg(long, conflicts_with = "density")]
        degree: Option<u32>,
        /// Check a declared density and list the modular chain.
        #[arg(long)]
        density: Option<String>,
    },
    /// Check that a patch is a Poisson transversal.
    Transversal {
        #[command(flatten)]
        scene: SceneArg,
        #[arg(long)]
        patch: String,
    },
    /// Integrate a form over a patch; `auto` builds the HNPT certificate.
    Pair {
        #[command(flatten)]
        scene: SceneArg,
        #[arg(long)]
        patch: String,
        #[arg(long, default_value = "auto")]
        form: String,
        /// Density for `--form auto`; defaults to the first invariant one.
        #[arg(long)]
        density: Option<String>,
    },
    /// Run every applicable check and the verdict engine.
    Report(SceneArg),
    /// Linear Dirac structure operations on rational matrices.
    #[command(subcommand)]
    Dirac(DiracCommand),
    /// Classify a Lie algebra R^2 x_A R or a named three-dimensional algebra.
    #[command(name = "classify-lie3")]
    ClassifyLie3 {
        /// Entries a,b,c,d of A = [[a,b],[c,d]].
        #[arg(long, conflicts_with = "name", allow_hyphen_values = true)]
        matrix: Option<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// List built-in scenes.
    Scenes {
        /// Print one scene as JSON.
        #[arg(long)]
        dump: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct SceneArg {
    /// Scene file path or built-in scene name.
    pub scene: String,
}

/// Lagrangian subspaces are given as `tangent:N`, `cotangent:N`,
/// `bivector:M`, `form:M` or `rows:M`, with `M` written `a,b;c,d`.
#[derive(Debug, Subcommand)]
pub enum DiracCommand {
    /// Spinor line of L.
    Spinor {
        #[arg(long, allow_hyphen_values = true)]
        lagrangian: String,
    },
    /// Co-spinor line of L.
    Cospinor {
        #[arg(long, allow_hyphen_values = true)]
        lagrangian: String,
    },
    /// Backward image f^!(L) for f given as an m x n matrix.
    Pullback {
        #[arg(long, allow_hyphen_values = true)]
        lagrangian: String,
        #[arg(long, allow_hyphen_values = true)]
        map: String,
    },
    /// Forward image f_!(L) for f given as an m x n matrix.
    Pushforward {
        #[arg(long, allow_hyphen_values = true)]
        lagrangian: String,
        #[arg(long, allow_hyphen_values = true)]
        map: String,
    },
    /// Transversality conditions for the subspace spanned by the given rows.
    Conditions {
        #[arg(long, allow_hyphen_values = true)]
        lagrangian: String,
        #[arg(long, allow_hyphen_values = true)]
        subspace: String,
    },
}
