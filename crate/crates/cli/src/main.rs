//! `scatterlab` command-line harness.
//!
//! Exit status: 0 on success, 1 on contract or validation errors, 2 on I/O
//! errors. `SCATTERLAB_THREADS` sets the worker count and
//! `SCATTERLAB_PRECISION` the significant digits of CSV floats.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use scatterlab::dynamics::{PhaseState, TraceLimits, trace};
use scatterlab::geometry::Scene;
use scatterlab::io::{
    CsvError, DEFAULT_PRECISION, DocumentError, SceneDocument, parse_document, read_spectrum_csv, write_atlas_csv,
    write_coverage_csv, write_reconstruction_csv, write_sls_csv, write_trace_csv, write_travel_csv,
};
use scatterlab::rigidity::{
    CoverageParams, HIDDEN_TAG, LivshitsParams, accessible_coverage, boundary_truth, compare_spectra, livshits_demo,
    point_set_hausdorff, random_probes, reconstruct_boundary, reflection_count_probe,
};
use scatterlab::spectra::{PairGrid, ShootingParams, scan_sls, travelling_time_spectrum};
use scatterlab::vector;

#[derive(Parser)]
#[command(name = "scatterlab", version, about = "Billiard scattering experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a scene document.
    Validate { scene: PathBuf },
    /// Trace one trajectory and write its events.
    Trace {
        scene: PathBuf,
        #[arg(long, value_parser = floats, allow_hyphen_values = true)]
        point: Coords,
        #[arg(long, value_parser = floats, allow_hyphen_values = true)]
        direction: Coords,
        #[arg(long)]
        max_reflections: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sojourn times over the impact lattice of one incoming direction.
    Sls {
        scene: PathBuf,
        #[arg(long, value_parser = floats, allow_hyphen_values = true)]
        omega: Coords,
        /// Lattice points per axis.
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long)]
        max_reflections: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Travelling times between points of the reference sphere.
    Travel {
        scene: PathBuf,
        /// Points on the reference sphere.
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long, default_value_t = 1.0)]
        min_separation: f64,
        /// Seed directions per start point.
        #[arg(long)]
        seeds: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two spectrum CSVs sampled on the same grid.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        tol: f64,
    },
    /// Reflection counts of random probes in two scenes.
    ProbeCounts {
        scene_a: PathBuf,
        scene_b: PathBuf,
        #[arg(long, default_value_t = 1000)]
        probes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fraction of each boundary piece reached by random probes.
    Coverage {
        scene: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        rays: usize,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Where to write the unreached boundary samples.
        #[arg(long)]
        atlas: Option<PathBuf>,
    },
    /// Boundary points from the one-reflection travelling times of a scene.
    Reconstruct {
        scene: PathBuf,
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Elliptic-cavity scenes that differ only where no ray can reach.
    DemoLivshits {
        #[arg(long, default_value_t = 100_000)]
        rays: usize,
        #[arg(long, default_value_t = 1000)]
        focal_rays: usize,
        #[arg(long, default_value_t = 24)]
        grid_points: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2.0)]
        semi_major: f64,
        #[arg(long, default_value_t = 1.0)]
        focal: f64,
        /// Half-width of the opening; defaults to the focal half-distance.
        #[arg(long)]
        aperture: Option<f64>,
        /// Directory for the two travelling-time tables.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

enum Failure {
    Contract(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Contract(_) => 1,
            Failure::Io(_) => 2,
        }
    }
}

impl From<scatterlab::Error> for Failure {
    fn from(e: scatterlab::Error) -> Self {
        Failure::Contract(e.to_string())
    }
}

impl From<CsvError> for Failure {
    fn from(e: CsvError) -> Self {
        let io = match &e {
            CsvError::Io(_) => true,
            CsvError::Csv(c) => c.is_io_error(),
            CsvError::Format { .. } => false,
        };
        if io { Failure::Io(e.to_string()) } else { Failure::Contract(e.to_string()) }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Comma separated coordinates, e.g. `-10,0`.
#[derive(Clone, Debug)]
struct Coords(Vec<f64>);

fn floats(s: &str) -> Result<Coords, String> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()
        .map(Coords)
}

fn env_usize(name: &str) -> Outcome<Option<usize>> {
    match std::env::var(name) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Contract(format!("{name}={v} is not a non-negative integer"))),
        Err(_) => Ok(None),
    }
}

struct Document {
    scene: Scene,
    doc: SceneDocument,
    path: PathBuf,
}

impl Document {
    fn load(path: &Path) -> Outcome<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        let located = |e: DocumentError| Failure::Contract(format!("{}: {e}", path.display()));
        let doc = parse_document(&text).map_err(located)?;
        let scene = doc.to_scene().map_err(located)?;
        Ok(Self { scene, doc, path: path.to_path_buf() })
    }

    fn seed(&self, command: &str) -> Outcome<u64> {
        self.doc.metadata.seed.ok_or_else(|| {
            Failure::Contract(format!(
                "{}: schema violation at metadata.seed: `{command}` needs a seed",
                self.path.display()
            ))
        })
    }
}

fn limits(scene: &Scene, max_reflections: Option<usize>) -> TraceLimits {
    let l = TraceLimits::for_scene(scene);
    match max_reflections {
        Some(n) => l.with_max_reflections(n),
        None => l,
    }
}

/// Runs `write` against the file at `path`, or stdout.
fn emit(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> Result<(), CsvError>) -> Outcome<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            write(&mut w)?;
            w.flush().map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            Ok(())
        }
    }
}

fn run(cli: Cli, precision: usize) -> Outcome<()> {
    match cli.command {
        Command::Validate { scene } => {
            Document::load(&scene)?;
            println!("OK");
        }
        Command::Trace { scene, point, direction, max_reflections, out } => {
            let d = Document::load(&scene)?;
            let start = PhaseState::new(vector(&point.0), vector(&direction.0))?;
            let rec = trace(&d.scene, &start, &limits(&d.scene, max_reflections))?;
            emit(out.as_deref(), |w| write_trace_csv(w, &rec, precision))?;
            eprintln!(
                "{:?} after {} reflections, length {}",
                rec.classification,
                rec.reflections(),
                rec.total_length
            );
        }
        Command::Sls { scene, omega, grid, max_reflections, out } => {
            let d = Document::load(&scene)?;
            let table = scan_sls(&d.scene, &vector(&omega.0), grid, &limits(&d.scene, max_reflections))?;
            emit(out.as_deref(), |w| write_sls_csv(w, &table, precision))?;
            eprintln!(
                "{} cells, {} samples, {} cut off",
                table.cells.len(),
                table.sample_count(),
                table.diagnostics.cutoff
            );
        }
        Command::Travel { scene, points, min_separation, seeds, out } => {
            let d = Document::load(&scene)?;
            let mut params = ShootingParams::for_scene(&d.scene);
            if let Some(n) = seeds {
                params.seeds = n;
            }
            let grid = PairGrid::on_sphere(&d.scene, points, min_separation);
            let table = travelling_time_spectrum(&d.scene, &grid, &params, &TraceLimits::for_scene(&d.scene))?;
            emit(out.as_deref(), |w| write_travel_csv(w, &table, precision))?;
            eprintln!(
                "{} cells, {} samples, {} seed trajectories cut off, {} brackets dropped",
                table.cells.len(),
                table.sample_count(),
                table.diagnostics.cutoff,
                table.diagnostics.dropped
            );
        }
        Command::Compare { a, b, tol } => {
            let load = |p: &Path| -> Outcome<_> {
                let f = File::open(p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
                read_spectrum_csv(f).map_err(|e| match Failure::from(e) {
                    Failure::Contract(m) => Failure::Contract(format!("{}: {m}", p.display())),
                    Failure::Io(m) => Failure::Io(format!("{}: {m}", p.display())),
                })
            };
            let r = compare_spectra(&load(&a)?, &load(&b)?, tol)?;
            println!("cells {}", r.distances.len());
            println!("matched_fraction {}", r.matched_fraction);
            println!("max_discrepancy {}", r.max_discrepancy);
            println!("one_sided {}", r.one_sided);
            println!("verdict {}", r.verdict);
        }
        Command::ProbeCounts { scene_a, scene_b, probes, out } => {
            let da = Document::load(&scene_a)?;
            let db = Document::load(&scene_b)?;
            let seed = da.seed("probe-counts")?;
            let states = random_probes(&da.scene, probes, seed);
            let r = reflection_count_probe(&da.scene, &db.scene, &states, &TraceLimits::for_scene(&da.scene))?;
            if let Some(p) = out.as_deref() {
                emit(Some(p), |w| {
                    writeln!(w, "probe,count_a,count_b")?;
                    for (i, (x, y)) in r.counts.iter().enumerate() {
                        writeln!(w, "{i},{x},{y}")?;
                    }
                    Ok(())
                })?;
            }
            println!("probes {}", r.counts.len());
            println!("equal {}", r.equal);
            println!("equal_fraction {}", r.equal_fraction);
        }
        Command::Coverage { scene, rays, epsilon, out, atlas } => {
            let d = Document::load(&scene)?;
            let params = CoverageParams::new(rays, epsilon, d.seed("coverage")?);
            let r = accessible_coverage(&d.scene, &params, &TraceLimits::for_scene(&d.scene))?;
            emit(out.as_deref(), |w| write_coverage_csv(w, &r, precision))?;
            if let Some(p) = atlas.as_deref() {
                emit(Some(p), |w| write_atlas_csv(w, &r, precision))?;
            }
            eprintln!("{} rays, {} escaped, {} reflection points marked", r.rays, r.escaped, r.marked);
            if let Some(h) = r.tagged_coverage(HIDDEN_TAG) {
                eprintln!("largest coverage of `{HIDDEN_TAG}` arcs: {h}");
            }
        }
        Command::Reconstruct { scene, points, out } => {
            let d = Document::load(&scene)?;
            let grid = PairGrid::on_sphere(&d.scene, points, 1.0);
            let params = ShootingParams::for_scene(&d.scene);
            let table = travelling_time_spectrum(&d.scene, &grid, &params, &TraceLimits::for_scene(&d.scene))?;
            let ball = d.scene.ball();
            let mut estimate = reconstruct_boundary(&table, &ball.center, ball.radius)?;
            let truth = boundary_truth(&d.scene, 720);
            if !truth.is_empty() {
                estimate = estimate.with_ground_truth(&truth, 0.02 * ball.radius);
            }
            emit(out.as_deref(), |w| write_reconstruction_csv(w, &estimate, precision))?;
            eprintln!(
                "{} points, {} skipped, {} filtered",
                estimate.points.len(),
                estimate.skipped,
                estimate.filtered
            );
            if let Some(c) = estimate.coverage {
                eprintln!(
                    "hausdorff distance to the bodies {}, coverage at 0.02a {c}",
                    point_set_hausdorff(&estimate.positions(), &truth)
                );
            }
        }
        Command::DemoLivshits { rays, focal_rays, grid_points, seed, semi_major, focal, aperture, out_dir } => {
            let params = LivshitsParams {
                semi_major,
                focal,
                aperture: aperture.unwrap_or(focal),
                aperture_rays: rays,
                focal_rays,
                grid_points,
                seed,
                ..LivshitsParams::default()
            };
            let r = livshits_demo(&params)?;
            if let Some(dir) = out_dir.as_deref() {
                std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
                for (name, table) in ["pocket.csv", "flat.csv"].iter().zip(&r.spectra) {
                    emit(Some(&dir.join(name)), |w| write_travel_csv(w, table, precision))?;
                }
            }
            println!("focal_error {}", r.focal_error);
            for (x0, deg, x) in &r.exit_checks {
                println!("exit x0={x0} angle={deg} crossing={x}");
            }
            println!("exits_between_foci {}", r.exits_between_foci);
            println!("aperture_rays {}", r.aperture_rays);
            println!("hidden_hits pocket={} flat={}", r.hidden_hits[0], r.hidden_hits[1]);
            println!("matched_fraction {}", r.comparison.matched_fraction);
            println!("max_discrepancy {}", r.comparison.max_discrepancy);
            println!("verdict {}", r.comparison.verdict);
        }
    }
    Ok(())
}

fn setup() -> Outcome<usize> {
    if let Some(n) = env_usize("SCATTERLAB_THREADS")? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Contract(format!("SCATTERLAB_THREADS: {e}")))?;
    }
    match env_usize("SCATTERLAB_PRECISION")? {
        None => Ok(DEFAULT_PRECISION),
        Some(p) if (1..=17).contains(&p) => Ok(p),
        Some(p) => Err(Failure::Contract(format!("SCATTERLAB_PRECISION={p} is outside 1..=17"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match setup().and_then(|precision| run(cli, precision)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Contract(m) => eprintln!("error: {m}"),
                Failure::Io(m) => eprintln!("i/o error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
