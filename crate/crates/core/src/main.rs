use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mobnet::config::{RunConfig, YearRange};
use mobnet::export::{export_geojson, write_dot, write_geojson};
use mobnet::inclusiveness::{write_scores_csv, write_slopegraph_csv};
use mobnet::ingest::{write_records, write_rejects, Gender, StemClass};
use mobnet::metrics::{
    gender_columns, top_k, write_report_csv, write_report_table, write_top_csv, DegreePairing, Direction, MetricsReport,
};
use mobnet::network::CohortSlice;
use mobnet::pipeline::Study;
use mobnet::shares::{country_shares, sn_share_timeseries, write_share_csv, write_timeseries_csv, PopulationTable};

#[derive(Parser, Debug)]
#[command(name = "mobnet", version, about = "Special-needs student mobility networks")]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true, default_value = "mobnet.toml")]
    config: PathBuf,
    /// Override the configured year range, e.g. 2008-2013.
    #[arg(long, global = true, value_parser = parse_range)]
    years: Option<YearRange>,
    /// Override the configured output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Override the configured number of decimal places.
    #[arg(long, global = true)]
    places: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse every year and write normalized records and the reject report.
    Ingest,
    /// Summary statistics for one year (all, M and F columns).
    Metrics {
        #[arg(long)]
        year: i32,
        #[command(flatten)]
        cohort: CohortArgs,
    },
    /// Top-k institutions by out- or in-degree.
    Top {
        #[arg(long)]
        year: i32,
        #[arg(long, value_enum, default_value_t = DirectionArg::Out)]
        direction: DirectionArg,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[command(flatten)]
        cohort: CohortArgs,
    },
    /// Inclusiveness index of persistent receivers, early vs late window.
    Inclusiveness {
        #[arg(long, value_parser = parse_window)]
        early: Window,
        #[arg(long, value_parser = parse_window)]
        late: Window,
    },
    /// Special-needs share timeseries, and per-country shares for --year.
    Shares {
        #[arg(long)]
        year: Option<i32>,
    },
    /// GeoJSON of one year's network with node roles.
    ExportGeo {
        #[arg(long)]
        year: i32,
        #[command(flatten)]
        cohort: CohortArgs,
    },
    /// Graphviz description of one year's network.
    ExportDot {
        #[arg(long)]
        year: i32,
        #[command(flatten)]
        cohort: CohortArgs,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct CohortArgs {
    #[arg(long, value_enum, default_value_t = SliceArg::All)]
    slice: SliceArg,
    #[arg(long, value_enum, default_value_t = StemArg::All)]
    stem: StemArg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum SliceArg {
    All,
    #[value(name = "F")]
    F,
    #[value(name = "M")]
    M,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum StemArg {
    All,
    Stem,
    Nonstem,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum DirectionArg {
    Out,
    In,
}

#[derive(Debug, Clone)]
struct Window(Vec<i32>);

impl CohortArgs {
    fn slice(&self) -> CohortSlice {
        CohortSlice {
            gender: match self.slice {
                SliceArg::All => None,
                SliceArg::F => Some(Gender::F),
                SliceArg::M => Some(Gender::M),
            },
            stem: match self.stem {
                StemArg::All => None,
                StemArg::Stem => Some(StemClass::Stem),
                StemArg::Nonstem => Some(StemClass::NonStem),
            },
        }
    }

    fn suffix(&self) -> String {
        let mut s = String::new();
        match self.slice {
            SliceArg::All => {}
            SliceArg::F => s.push_str("_F"),
            SliceArg::M => s.push_str("_M"),
        }
        match self.stem {
            StemArg::All => {}
            StemArg::Stem => s.push_str("_stem"),
            StemArg::Nonstem => s.push_str("_nonstem"),
        }
        s
    }
}

fn parse_range(s: &str) -> Result<YearRange, String> {
    let (a, b) = s.split_once('-').unwrap_or((s, s));
    let year = |t: &str| t.trim().parse::<i32>().map_err(|_| format!("invalid year {t:?}"));
    let (start, end) = (year(a)?, year(b)?);
    if start > end {
        return Err(format!("empty range {s}"));
    }
    Ok(YearRange { start, end })
}

/// `2008-2010` or `2008,2010,2012`.
fn parse_window(s: &str) -> Result<Window, String> {
    if s.contains(',') {
        let years = s
            .split(',')
            .map(|t| t.trim().parse::<i32>().map_err(|_| format!("invalid year {t:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Window(years));
    }
    Ok(Window(parse_range(s)?.range().collect()))
}

enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn data(e: impl std::fmt::Display) -> Self {
        Failure::Data(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Context {
    config: RunConfig,
    places: usize,
}

impl Context {
    fn study(&self) -> Result<Study, Failure> {
        self.config.check_paths().map_err(Failure::data)?;
        Study::load(&self.config).map_err(Failure::data)
    }

    fn check_year(&self, year: i32) -> Outcome {
        if self.config.years.contains(year) {
            Ok(())
        } else {
            Err(Failure::Usage(format!(
                "year {year} outside configured range {}-{}",
                self.config.years.start, self.config.years.end
            )))
        }
    }

    fn create(&self, name: &str) -> Result<(PathBuf, BufWriter<File>), Failure> {
        let dir = &self.config.output_dir;
        std::fs::create_dir_all(dir).map_err(|e| Failure::Data(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(name);
        let file = File::create(&path).map_err(|e| Failure::Data(format!("cannot create {}: {e}", path.display())))?;
        Ok((path, BufWriter::new(file)))
    }

    fn write_file<F, E>(&self, name: &str, body: F) -> Outcome
    where
        F: FnOnce(&mut BufWriter<File>) -> Result<(), E>,
        E: std::fmt::Display,
    {
        let (path, mut sink) = self.create(name)?;
        body(&mut sink).map_err(Failure::data)?;
        sink.flush().map_err(Failure::data)?;
        println!("wrote {}", path.display());
        Ok(())
    }
}

fn run(cli: Cli) -> Outcome {
    let mut config = RunConfig::load(&cli.config).map_err(Failure::data)?;
    if let Some(years) = cli.years {
        config.years = years;
    }
    if let Some(out) = cli.out {
        config.output_dir = out;
    }
    let places = cli.places.unwrap_or(config.rounding);
    let ctx = Context { config, places };

    match cli.command {
        Command::Ingest => cmd_ingest(&ctx),
        Command::Metrics { year, cohort } => cmd_metrics(&ctx, year, cohort),
        Command::Top {
            year,
            direction,
            k,
            cohort,
        } => cmd_top(&ctx, year, direction, k as usize, cohort),
        Command::Inclusiveness { early, late } => cmd_inclusiveness(&ctx, &early.0, &late.0),
        Command::Shares { year } => cmd_shares(&ctx, year),
        Command::ExportGeo { year, cohort } => cmd_export_geo(&ctx, year, cohort),
        Command::ExportDot { year, cohort } => cmd_export_dot(&ctx, year, cohort),
    }
}

fn cmd_ingest(ctx: &Context) -> Outcome {
    ctx.config.check_paths().map_err(Failure::data)?;
    let c = &ctx.config;
    let dataset = mobnet::ingest::load_dataset(&c.data_dir, &c.schema_dir, &c.years.range()).map_err(Failure::data)?;
    ctx.write_file("records.csv", |w| write_records(w, &dataset.records))?;
    ctx.write_file("rejects.csv", |w| write_rejects(w, &dataset.rejects))?;
    println!(
        "years={} records={} rejects={}",
        dataset.years.len(),
        dataset.records.len(),
        dataset.rejects.len()
    );
    Ok(())
}

fn cmd_metrics(ctx: &Context, year: i32, cohort: CohortArgs) -> Outcome {
    ctx.check_year(year)?;
    let network = ctx.study()?.sn_network(year).map_err(Failure::data)?;
    let slice = cohort.slice();
    let reports: Vec<MetricsReport> = if slice.gender.is_none() {
        gender_columns(&network, &slice, DegreePairing::default())
    } else {
        vec![MetricsReport::compute(&network, &slice, DegreePairing::default())]
    };
    let stem = slice.stem.map_or(String::new(), |s| format!(", {s}"));
    let title = format!("Summary statistics - special-needs network - {year}{stem}");
    let base = format!("metrics_{year}{}", cohort.suffix());
    ctx.write_file(&format!("{base}.csv"), |w| write_report_csv(w, &reports, ctx.places))?;
    ctx.write_file(&format!("{base}.txt"), |w| {
        write_report_table(w, &title, &reports, ctx.places)
    })
}

fn cmd_top(ctx: &Context, year: i32, direction: DirectionArg, k: usize, cohort: CohortArgs) -> Outcome {
    ctx.check_year(year)?;
    let network = ctx.study()?.sn_network(year).map_err(Failure::data)?;
    let sub = network.subnetwork(&cohort.slice());
    let (dir, label) = match direction {
        DirectionArg::Out => (Direction::Out, "out"),
        DirectionArg::In => (Direction::In, "in"),
    };
    let entries = top_k(&sub, dir, k).map_err(|e| Failure::Usage(e.to_string()))?;
    ctx.write_file(&format!("top_{year}_{label}{}.csv", cohort.suffix()), |w| {
        write_top_csv(w, &entries)
    })
}

fn cmd_inclusiveness(ctx: &Context, early: &[i32], late: &[i32]) -> Outcome {
    for &y in early.iter().chain(late) {
        ctx.check_year(y)?;
    }
    let (scores, rows) = ctx.study()?.inclusiveness(early, late).map_err(Failure::data)?;
    ctx.write_file("inclusiveness_scores.csv", |w| write_scores_csv(w, &scores, ctx.places))?;
    ctx.write_file("slopegraph.csv", |w| write_slopegraph_csv(w, &rows, ctx.places))
}

fn cmd_shares(ctx: &Context, year: Option<i32>) -> Outcome {
    let population = match (year, &ctx.config.population_table) {
        (Some(_), None) => {
            return Err(Failure::Usage(
                "--year needs population_table in the configuration".into(),
            ))
        }
        (Some(y), Some(path)) => {
            ctx.check_year(y)?;
            Some(PopulationTable::load(path).map_err(Failure::data)?)
        }
        (None, _) => None,
    };
    let study = ctx.study()?;
    let years: Vec<i32> = study.dataset.years.iter().copied().collect();
    let series = sn_share_timeseries(&study.dataset.records, &years).map_err(Failure::data)?;
    ctx.write_file("sn_share_timeseries.csv", |w| {
        write_timeseries_csv(w, &series, ctx.places)
    })?;
    if let (Some(y), Some(pop)) = (year, population) {
        if !study.dataset.years.contains(&y) {
            return Err(Failure::Data(format!("no data for year {y}")));
        }
        let report = country_shares(&study.dataset.records, y, &pop).map_err(Failure::data)?;
        ctx.write_file(&format!("country_shares_{y}.csv"), |w| {
            write_share_csv(w, &report, ctx.places)
        })?;
        for w in &report.warnings {
            log::warn!("{w}");
        }
        ctx.write_file(&format!("country_shares_{y}.warnings.txt"), |f| {
            report.warnings.iter().try_for_each(|w| writeln!(f, "{w}"))
        })?;
    }
    Ok(())
}

fn cmd_export_geo(ctx: &Context, year: i32, cohort: CohortArgs) -> Outcome {
    ctx.check_year(year)?;
    let study = ctx.study()?;
    let network = study
        .sn_network(year)
        .map_err(Failure::data)?
        .subnetwork(&cohort.slice());
    let export = export_geojson(&network, &network.node_roles(), study.geo.as_ref());
    let base = format!("network_{year}{}", cohort.suffix());
    ctx.write_file(&format!("{base}.geojson"), |w| write_geojson(w, &export))?;
    if !export.missing_locations.is_empty() {
        log::warn!("{} institutions without coordinates", export.missing_locations.len());
    }
    ctx.write_file(&format!("{base}.missing_locations.txt"), |f| {
        export.missing_locations.iter().try_for_each(|c| writeln!(f, "{c}"))
    })
}

fn cmd_export_dot(ctx: &Context, year: i32, cohort: CohortArgs) -> Outcome {
    ctx.check_year(year)?;
    let network = ctx.study()?.sn_network(year).map_err(Failure::data)?;
    ctx.write_file(&format!("network_{year}{}.dot", cohort.suffix()), |w| {
        write_dot(w, &network, &cohort.slice())
    })
}

/// One line per failure on stderr: `mobnet: error[<kind>]: <message>`.
fn report(kind: &str, message: &str) {
    let flat = message.lines().map(str::trim).collect::<Vec<_>>().join(" ");
    eprintln!("mobnet: error[{kind}]: {flat}");
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("").trim_start_matches("error: ");
            report("usage", first);
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            report("usage", &m);
            ExitCode::from(1)
        }
        Err(Failure::Data(m)) => {
            report("data", &m);
            ExitCode::from(2)
        }
    }
}
