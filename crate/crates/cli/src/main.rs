use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use spencerlab::cli::{self, Along, CertifyComplex, Command, SceneFile, SpencerModule};
use spencerlab::{Error, Result};

#[derive(Parser)]
#[command(name = "spencerlab", version, about = "Exact homology of Koszul, de Rham, jet and Spencer complexes")]
struct Args {
    #[command(subcommand)]
    command: Cmd,

    /// Largest weight computed.
    #[arg(long, global = true, default_value_t = cli::DEFAULT_DEGREE_BOUND)]
    degree_bound: i64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Cmd {
    /// de Rham cohomology.
    Derham { scene: PathBuf },
    /// Jet (topological Spencer) complex of order r.
    Jet {
        scene: PathBuf,
        #[arg(long)]
        r: u32,
    },
    /// Spencer complex with coefficients in O, omega1 or omega-top.
    Spencer {
        scene: PathBuf,
        #[arg(long, default_value = "O")]
        module: String,
    },
    /// Koszul complex of the given elements (default: the coordinates).
    Koszul {
        scene: PathBuf,
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        elements: Option<Vec<String>>,
    },
    /// Augmented filtered Spencer resolution F^p D (x) wedge T -> O.
    FilteredSpencer {
        scene: Option<PathBuf>,
        /// Use unit-weight affine n-space instead of a scene.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: u32,
    },
    /// Kashiwara quotient F^p D / I F^p D.
    Kashiwara {
        scene: PathBuf,
        #[arg(long)]
        p: u32,
    },
    /// Euler-field contracting homotopy certificate.
    EulerCertify {
        scene: PathBuf,
        /// derham, jet or jetN.
        #[arg(long, default_value = "derham")]
        complex: String,
    },
    /// Milnor and Tjurina numbers of a hypersurface.
    Milnor { scene: PathBuf },
    /// Jacobian smoothness criterion.
    Smooth { scene: PathBuf },
    /// Degree-zero Spencer homology O / alpha(T).
    SpencerH0 { scene: PathBuf },
    /// Completed de Rham cohomology of the ambient space along an ideal.
    Complete {
        scene: PathBuf,
        /// `self`, `vars` or a scene file whose ideal is used.
        #[arg(long, default_value = "self")]
        along: String,
        #[arg(long)]
        r_max: Option<usize>,
    },
    /// Derived completion of the structure sheaf.
    DerivedComplete {
        scene: PathBuf,
        #[arg(long, default_value = "vars")]
        along: String,
        #[arg(long)]
        r_max: Option<usize>,
    },
    /// Compare completed complexes of two embeddings of the same variety.
    Independence {
        scene: PathBuf,
        #[arg(long)]
        extended_scene: PathBuf,
        #[arg(long)]
        r_max: Option<usize>,
    },
}

fn along(text: &str) -> Result<Along> {
    Ok(match text {
        "self" => Along::SelfIdeal,
        "vars" => Along::Variables,
        path => Along::Scene(Box::new(cli::load_scene(path.as_ref())?)),
    })
}

fn translate(cmd: Cmd) -> Result<(Command, Option<SceneFile>)> {
    let load = |p: &PathBuf| cli::load_scene(p);
    Ok(match cmd {
        Cmd::Derham { scene } => (Command::DeRham, Some(load(&scene)?)),
        Cmd::Jet { scene, r } => (Command::Jet { r }, Some(load(&scene)?)),
        Cmd::Spencer { scene, module } => {
            (Command::Spencer { module: module.parse::<SpencerModule>()? }, Some(load(&scene)?))
        }
        Cmd::Koszul { scene, elements } => (Command::Koszul { elements }, Some(load(&scene)?)),
        Cmd::FilteredSpencer { scene, n, p } => {
            if n.is_some() && scene.is_some() {
                return Err(Error::Invalid("give either a scene or --n, not both".into()));
            }
            (Command::FilteredSpencer { n, p }, scene.as_ref().map(load).transpose()?)
        }
        Cmd::Kashiwara { scene, p } => (Command::Kashiwara { p }, Some(load(&scene)?)),
        Cmd::EulerCertify { scene, complex } => {
            (Command::EulerCertify { complex: complex.parse::<CertifyComplex>()? }, Some(load(&scene)?))
        }
        Cmd::Milnor { scene } => (Command::Milnor, Some(load(&scene)?)),
        Cmd::Smooth { scene } => (Command::Smooth, Some(load(&scene)?)),
        Cmd::SpencerH0 { scene } => (Command::SpencerH0, Some(load(&scene)?)),
        Cmd::Complete { scene, along: a, r_max } => {
            (Command::Complete { along: along(&a)?, r_max }, Some(load(&scene)?))
        }
        Cmd::DerivedComplete { scene, along: a, r_max } => {
            (Command::DerivedComplete { along: along(&a)?, r_max }, Some(load(&scene)?))
        }
        Cmd::Independence { scene, extended_scene, r_max } => (
            Command::Independence { extended: Box::new(load(&extended_scene)?), r_max },
            Some(load(&scene)?),
        ),
    })
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = translate(args.command).and_then(|(cmd, scene)| cli::run(&cmd, scene.as_ref(), args.degree_bound));
    match result {
        Ok(doc) => {
            match args.format {
                Format::Json => print!("{}", cli::to_json_string(&doc)),
                Format::Table => print!("{}", cli::render_text(&doc)),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
