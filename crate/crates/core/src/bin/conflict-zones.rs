use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use conflict_zones::config::InputPaths;
use conflict_zones::io::{self, ResultFiles};
use conflict_zones::scenario::{summarize_sweep, top_class_share};
use conflict_zones::{
    compare_runs, run_scenario, sweep_alpha, Error, LayerSet, Resource, Result, ScenarioConfig,
    World,
};

#[derive(Parser)]
#[command(
    name = "conflict-zones",
    version,
    about = "Conflict-of-interest maps for a polar grid"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check inputs and configuration, listing defaulted parameters.
    Validate(Inputs),
    /// Run one scenario and write its result files.
    Run {
        #[command(flatten)]
        inputs: Inputs,
        /// Foreign-EEZ interest applied to every country and resource.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Also write a GeoJSON point layer of the classes.
        #[arg(long)]
        geojson: bool,
    },
    /// Run one scenario per alpha and summarize the EEZ shift.
    Sweep {
        #[command(flatten)]
        inputs: Inputs,
        /// Comma-separated alpha values.
        #[arg(long, value_delimiter = ',')]
        alphas: Option<Vec<f64>>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two result directories cell by cell.
    Compare {
        #[command(flatten)]
        inputs: Inputs,
        before: PathBuf,
        after: PathBuf,
        /// Write comparison.csv and deltas.csv here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Redraw the class raster of a result directory.
    Render {
        result: PathBuf,
        /// Output file; defaults to the raster inside the result directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Inputs {
    /// Scenario file; its [inputs] paths are used where no flag is given.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    world: Option<PathBuf>,
    #[arg(long)]
    countries: Option<PathBuf>,
    #[arg(long)]
    oil: Option<PathBuf>,
    #[arg(long)]
    gas: Option<PathBuf>,
    #[arg(long)]
    fish: Option<PathBuf>,
    #[arg(long)]
    maritime: Option<PathBuf>,
}

struct Loaded {
    config: ScenarioConfig,
    defaulted: Vec<String>,
    alphas: Option<Vec<f64>>,
    world: World,
    layers: LayerSet,
}

impl Inputs {
    fn paths(&self) -> Result<(ScenarioConfig, Vec<String>, InputPaths)> {
        let (config, defaulted, mut paths) = match &self.config {
            Some(p) => {
                let loaded = ScenarioConfig::load(p)?;
                (loaded.scenario, loaded.defaulted, loaded.inputs)
            }
            None => (
                ScenarioConfig::default(),
                vec!["no config file given, all parameters at defaults".to_owned()],
                InputPaths::default(),
            ),
        };
        if let Some(p) = &self.world {
            paths.world = Some(p.clone());
        }
        if let Some(p) = &self.countries {
            paths.countries = Some(p.clone());
        }
        for (r, p) in [
            (Resource::Oil, &self.oil),
            (Resource::Gas, &self.gas),
            (Resource::Fish, &self.fish),
            (Resource::Maritime, &self.maritime),
        ] {
            if let Some(p) = p {
                paths.layers.insert(r, p.clone());
            }
        }
        Ok((config, defaulted, paths))
    }

    fn world(&self) -> Result<World> {
        let (_, _, paths) = self.paths()?;
        let (world, _) = io::load_inputs(
            required(&paths.countries, "countries")?,
            required(&paths.world, "world")?,
            &BTreeMap::new(),
        )?;
        Ok(world)
    }

    fn load(&self) -> Result<Loaded> {
        let (config, defaulted, paths) = self.paths()?;
        let countries = required(&paths.countries, "countries")?;
        let world_path = required(&paths.world, "world")?;
        if let Some(&missing) = Resource::ALL.iter().find(|r| !paths.layers.contains_key(r)) {
            return Err(Error::MissingLayer(missing));
        }
        let (world, layers) = io::load_inputs(countries, world_path, &paths.layers)?;
        layers.check_complete(world.len())?;
        config.validate_for(&world)?;
        Ok(Loaded {
            config,
            defaulted,
            alphas: paths.alphas,
            world,
            layers,
        })
    }
}

fn required<'a>(path: &'a Option<PathBuf>, name: &str) -> Result<&'a Path> {
    path.as_deref().ok_or_else(|| {
        Error::InvalidConfig(format!(
            "no {name} file: pass --{name} or set inputs.{name}"
        ))
    })
}

fn validate(inputs: &Inputs) -> Result<()> {
    let l = inputs.load()?;
    let grid = l.world.grid();
    println!(
        "ok: {} cells ({} x {}), {} countries, {} layers",
        l.world.len(),
        grid.rows(),
        grid.cols(),
        l.world.countries().len(),
        l.layers.iter().count()
    );
    for d in &l.defaulted {
        println!("default: {d}");
    }
    Ok(())
}

fn run(inputs: &Inputs, alpha: Option<f64>, out: &Path, geojson: bool) -> Result<()> {
    let l = inputs.load()?;
    let config = match alpha {
        Some(a) if !(0.0..=1.0).contains(&a) => return Err(Error::AlphaOutOfRange(a)),
        Some(a) => l.config.with_uniform_alpha(a),
        None => l.config,
    };
    let result = run_scenario(&l.world, &l.layers, &config)?;
    io::write_result(&result).write_dir(out)?;
    if geojson {
        io::write_file(
            &out.join("classes.geojson"),
            &io::write_geojson(&l.world, &result),
        )?;
    }
    let share = top_class_share(&l.world, &result);
    println!(
        "{} cells, class counts {:?}, top class {} in {} cells ({} in EEZs)",
        result.len(),
        result.class_counts,
        share
            .class
            .map_or_else(|| "-".to_owned(), |c| c.to_string()),
        share.cells,
        share.in_eez
    );
    Ok(())
}

fn alpha_dir(alpha: f64) -> String {
    format!("alpha_{alpha}")
}

fn sweep(inputs: &Inputs, alphas: Option<Vec<f64>>, out: &Path) -> Result<()> {
    let l = inputs.load()?;
    let alphas = alphas.or(l.alphas).ok_or_else(|| {
        Error::InvalidConfig("no alphas: pass --alphas or set sweep.alphas".into())
    })?;
    if alphas.is_empty() {
        return Err(Error::InvalidConfig("alpha list is empty".into()));
    }
    let runs = sweep_alpha(&l.world, &l.layers, &l.config, &alphas)?;
    for (a, result) in &runs {
        io::write_result(result).write_dir(&out.join(alpha_dir(*a)))?;
    }
    let rows = summarize_sweep(&l.world, &runs);
    io::write_file(
        &out.join("sweep_summary.csv"),
        &io::write_sweep_summary(&rows),
    )?;

    let (first, last) = (&runs[0], &runs[runs.len() - 1]);
    let cmp = compare_runs(&l.world, &first.1, &last.1)?;
    io::write_file(&out.join("comparison.csv"), &io::write_comparison(&cmp))?;
    io::write_file(&out.join("deltas.csv"), &io::write_deltas(&last.1, &cmp))?;
    for r in &rows {
        println!(
            "alpha {}: top class {} cells, {:.3} in EEZs",
            r.alpha,
            r.share.cells,
            r.share.eez_fraction()
        );
    }
    Ok(())
}

fn compare(inputs: &Inputs, before: &Path, after: &Path, out: Option<&Path>) -> Result<()> {
    let world = inputs.world()?;
    let r1 = io::parse_result(&ResultFiles::read_dir(before)?)?;
    let r2 = io::parse_result(&ResultFiles::read_dir(after)?)?;
    if r1.cell_ids != world.cell_ids() || r2.cell_ids != world.cell_ids() {
        return Err(Error::GridMismatch(world.len(), r1.len()));
    }
    let cmp = compare_runs(&world, &r1, &r2)?;
    let table = io::write_comparison(&cmp);
    match out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| Error::Io {
                path: dir.to_owned(),
                source,
            })?;
            io::write_file(&dir.join("comparison.csv"), &table)?;
            io::write_file(&dir.join("deltas.csv"), &io::write_deltas(&r2, &cmp))?;
        }
        None => print!("{table}"),
    }
    Ok(())
}

fn render(result: &Path, out: Option<&Path>) -> Result<()> {
    let r = io::parse_result(&ResultFiles::read_dir(result)?)?;
    let pgm = io::render_pgm(r.rows, r.cols, &r.overall);
    let target = out.map_or_else(|| result.join(ResultFiles::RASTER), Path::to_path_buf);
    io::write_file(&target, &pgm)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match &cli.command {
        Command::Validate(inputs) => validate(inputs),
        Command::Run {
            inputs,
            alpha,
            out,
            geojson,
        } => run(inputs, *alpha, out, *geojson),
        Command::Sweep {
            inputs,
            alphas,
            out,
        } => sweep(inputs, alphas.clone(), out),
        Command::Compare {
            inputs,
            before,
            after,
            out,
        } => compare(inputs, before, after, out.as_deref()),
        Command::Render { result, out } => render(result, out.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}
