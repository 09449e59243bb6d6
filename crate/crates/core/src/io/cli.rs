//! The `harmonic` command-line driver.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use super::mesh_file::{load_mesh, save_mesh, write_cochain};
use super::pipeline::{
    check_dimensions, check_normal, check_tangent, check_topology, run_verification, VerifyConfig,
};
use super::report::VerificationReport;
use super::vtk::export_vtk;
use crate::complex::{build_complex, Cochain, DeRhamComplex};
use crate::error::{Error, Result};
use crate::harmonic_tangent::Variant;
use crate::meshgen::{generate_canonical, CanonicalDomainSpec, DomainKind, MarkedMesh};
use crate::solvers::SolverConfig;

#[derive(Parser, Debug)]
#[command(name = "harmonic", version, about = "Discrete harmonic vector fields on tetrahedral meshes")]
struct Cli {
    /// Print stage timings and progress to standard error.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a canonical domain mesh and save it.
    Mesh {
        #[arg(long, value_parser = parse_domain)]
        domain: DomainKind,
        #[arg(long)]
        resolution: usize,
        #[arg(long, default_value_t = 1.0)]
        cell_size: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Betti numbers, harmonic dimensions and marker validation.
    Topology {
        #[command(flatten)]
        source: Source,
        /// Skip the dense harmonic-dimension computation.
        #[arg(long)]
        no_dense: bool,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Normal harmonic fields (one per cavity).
    HarmonicNormal {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        solve: SolveArgs,
        /// Directory for `phi_i.txt` and `v_i.txt` cochain files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tangent harmonic fields (one per tunnel).
    HarmonicTangent {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, default_value = "full", value_parser = parse_variant)]
        variant: Variant,
        /// Also solve the other variant and report the equivalence gap.
        #[arg(long)]
        compare: bool,
        /// Directory for `a_i.txt` and `w_i.txt` cochain files.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Full pipeline with every check.
    Verify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, default_value = "full", value_parser = parse_variant)]
        variant: Variant,
        /// Skip the dense null-space checks.
        #[arg(long)]
        no_dense: bool,
    },
    /// Write the mesh with all harmonic fields as a legacy VTK file.
    ExportVtk {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct Source {
    #[arg(long, value_parser = parse_domain, conflicts_with = "mesh", required_unless_present = "mesh", requires = "resolution")]
    domain: Option<DomainKind>,
    #[arg(long, conflicts_with = "mesh")]
    resolution: Option<usize>,
    #[arg(long, default_value_t = 1.0, conflicts_with = "mesh")]
    cell_size: f64,
    /// Mesh file written by `harmonic mesh`.
    #[arg(long)]
    mesh: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Relative residual tolerance of the linear solvers.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Tolerance of the floating-point checks.
    #[arg(long, default_value_t = 1e-8)]
    check_tol: f64,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Directory for VTK output.
    #[arg(long)]
    vtk: Option<PathBuf>,
}

fn parse_domain(s: &str) -> std::result::Result<DomainKind, String> {
    s.parse().map_err(|_| {
        let names: Vec<_> = DomainKind::ALL.iter().map(|k| k.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl Source {
    fn load(&self) -> Result<(MarkedMesh, Option<DomainKind>, String)> {
        match (&self.mesh, self.domain) {
            (Some(path), _) => Ok((load_mesh(path)?, None, format!("mesh {}", path.display()))),
            (None, Some(kind)) => {
                let n = self.resolution.unwrap_or(kind.minimum_resolution());
                let spec = CanonicalDomainSpec::new(kind, n).with_cell_size(self.cell_size);
                Ok((generate_canonical(&spec)?, Some(kind), format!("{kind} resolution {n}")))
            }
            (None, None) => Err(Error::InvalidSpec("either --domain or --mesh is required".into())),
        }
    }
}

impl SolveArgs {
    fn config(&self, variant: Variant) -> Result<VerifyConfig> {
        for (name, v) in [("--tol", self.tol), ("--check-tol", self.check_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidSpec(format!("{name} must be positive")));
            }
        }
        Ok(VerifyConfig {
            solver: SolverConfig::with_tolerance(self.tol),
            check_tolerance: self.check_tol,
            variant,
            dense_checks: true,
        })
    }
}

fn emit(report: &VerificationReport, path: Option<&Path>) -> Result<i32> {
    let text = report.render();
    print!("{text}");
    if let Some(p) = path {
        std::fs::write(p, &text)?;
    }
    Ok(if report.passed() { 0 } else { 1 })
}

fn write_cochains(dir: &Path, prefix: &str, cochains: &[Cochain]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for (i, c) in cochains.iter().enumerate() {
        std::fs::write(dir.join(format!("{prefix}_{}.txt", i + 1)), write_cochain(&c.values))?;
    }
    Ok(())
}

fn named<'a>(prefix: &str, cs: &'a [Cochain]) -> Vec<(String, &'a Cochain)> {
    cs.iter().enumerate().map(|(i, c)| (format!("{prefix}_{}", i + 1), c)).collect()
}

fn write_vtk_file(complex: &DeRhamComplex, title: &str, fields: &[(String, &Cochain)], path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let refs: Vec<(&str, &Cochain)> = fields.iter().map(|(n, c)| (n.as_str(), *c)).collect();
    export_vtk(complex, title, &refs, path)
}

fn run(cli: Cli) -> Result<i32> {
    let verbose = cli.verbose;
    let start = std::time::Instant::now();
    let log = |msg: &str| {
        if verbose {
            eprintln!("[{:8.3}s] {msg}", start.elapsed().as_secs_f64());
        }
    };
    match cli.command {
        Command::Mesh {
            domain,
            resolution,
            cell_size,
            out,
        } => {
            let mesh = generate_canonical(&CanonicalDomainSpec::new(domain, resolution).with_cell_size(cell_size))?;
            save_mesh(&mesh, &out)?;
            println!(
                "wrote {} ({} vertices, {} cells, {} tunnel loops, {} cut surfaces)",
                out.display(),
                mesh.vertices.len(),
                mesh.tets.len(),
                mesh.tunnel_loops.len(),
                mesh.cut_surfaces.len()
            );
            Ok(0)
        }
        Command::Topology {
            source,
            no_dense,
            report,
        } => {
            let (mesh, kind, title) = source.load()?;
            let complex = build_complex(&mesh)?;
            let mut r = VerificationReport::new(&complex);
            r.title = title;
            let betti = check_topology(&complex, kind, &mut r);
            log("betti numbers done");
            if !no_dense {
                check_dimensions(&complex, &betti, &mut r)?;
                log("harmonic dimensions done");
            }
            emit(&r, report.as_deref())
        }
        Command::HarmonicNormal { source, solve, out } => {
            let (mesh, _, title) = source.load()?;
            let complex = build_complex(&mesh)?;
            let config = solve.config(Variant::Full)?;
            let mut r = VerificationReport::new(&complex);
            r.title = title;
            let normal = check_normal(&complex, &config, &mut r)?;
            log("normal fields done");
            if let Some(dir) = &out {
                write_cochains(dir, "phi", &normal.potentials)?;
                write_cochains(dir, "v", &normal.fields)?;
            }
            if let Some(dir) = &solve.vtk {
                let mut fields = named("phi", &normal.potentials);
                fields.extend(named("v", &normal.fields));
                write_vtk_file(&complex, &r.title, &fields, &dir.join("normal.vtk"))?;
            }
            emit(&r, solve.report.as_deref())
        }
        Command::HarmonicTangent {
            source,
            solve,
            variant,
            compare,
            out,
        } => {
            let (mesh, _, title) = source.load()?;
            let complex = build_complex(&mesh)?;
            let config = solve.config(variant)?;
            let mut r = VerificationReport::new(&complex);
            r.title = format!("{title}, {variant} variant");
            let normal = check_normal(&complex, &config, &mut r)?;
            let (tangent, _) = check_tangent(&complex, &normal, &config, compare, &mut r)?;
            log("tangent fields done");
            if let Some(dir) = &out {
                write_cochains(dir, "a", &tangent.potentials)?;
                write_cochains(dir, "w", &tangent.fields)?;
            }
            if let Some(dir) = &solve.vtk {
                let lifts: Vec<Cochain> = tangent.lifts.iter().map(|l| l.potential.clone()).collect();
                let mut fields = named("ab", &lifts);
                fields.extend(named("a", &tangent.potentials));
                fields.extend(named("w", &tangent.fields));
                write_vtk_file(&complex, &r.title, &fields, &dir.join("tangent.vtk"))?;
            }
            emit(&r, solve.report.as_deref())
        }
        Command::Verify {
            source,
            solve,
            variant,
            no_dense,
        } => {
            let (mesh, kind, title) = source.load()?;
            let complex = build_complex(&mesh)?;
            let mut config = solve.config(variant)?;
            config.dense_checks = !no_dense;
            let run = run_verification(&complex, kind, &config)?;
            let mut r = run.report;
            r.title = format!("{title}, {variant} variant");
            for (stage, t) in &r.timings {
                log(&format!("{stage}: {t:.3}s"));
            }
            if let Some(dir) = &solve.vtk {
                let mut fields = named("v", &run.normal.fields);
                fields.extend(named("w", &run.tangent.fields));
                write_vtk_file(&complex, &r.title, &fields, &dir.join("fields.vtk"))?;
            }
            emit(&r, solve.report.as_deref())
        }
        Command::ExportVtk { source, tol, out } => {
            let (mesh, _, title) = source.load()?;
            let complex = build_complex(&mesh)?;
            let mut config = VerifyConfig::default();
            config.solver = SolverConfig::with_tolerance(tol);
            let mut r = VerificationReport::new(&complex);
            let normal = check_normal(&complex, &config, &mut r)?;
            let (tangent, _) = check_tangent(&complex, &normal, &config, false, &mut r)?;
            let mut fields = named("phi", &normal.potentials);
            fields.extend(named("v", &normal.fields));
            fields.extend(named("w", &tangent.fields));
            write_vtk_file(&complex, &title, &fields, &out)?;
            println!("wrote {} ({} fields)", out.display(), fields.len());
            Ok(0)
        }
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::ResolutionTooSmall { .. } | Error::InvalidSpec(_) => 2,
        _ => 1,
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code: 0 when every check passes, 1 on a failed check or
/// runtime error, 2 on a usage error.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}
