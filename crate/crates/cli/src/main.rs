use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use cayley_core::cayley::{cache, DistanceTable, DEFAULT_ENUMERATION_CAP, FULL_TABLE_MAX_DEGREE};
use cayley_core::classify::{census_table, ClassifyOptions, NormaliserMode};
use cayley_core::interval::GradedInterval;
use cayley_core::median::{self, Triangle};
use cayley_core::{
    census, classify, normaliser, partial_interval, DistanceOracle, Element, Error, GeodesicMode,
    GroupModel, ModelKind, Relation, Result,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "cayley",
    version,
    about = "Geodesics, intervals and medians in Cayley graphs"
)]
struct Cli {
    /// Group model: sym-circular:N, sym-adjacent:N, sym-custom:N:<g;g>,
    /// sym-sub:N:<g;g>, cyclic:N[:semigroup] or z2
    #[arg(long, global = true, env = "CAYLEY_MODEL")]
    model: Option<String>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Directory for distance-table cache files
    #[arg(long, global = true, env = "CAYLEY_CACHE_DIR")]
    cache_dir: Option<PathBuf>,

    /// Worker threads for whole-group sweeps (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Maximum number of geodesic words to materialise
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Word-metric distance d(g,h)
    Dist { g: String, h: String },
    /// Number of geodesic words from g to h, optionally listed
    Geodesics {
        g: String,
        h: String,
        #[arg(long)]
        enumerate: bool,
    },
    /// The graded interval [g,h]
    Interval {
        g: String,
        h: String,
        #[arg(long)]
        stats: bool,
        /// Only the k grades nearest each end
        #[arg(long, value_name = "K")]
        partial: Option<usize>,
    },
    /// Partition elements by a relation on their intervals [1,g]
    Classify {
        #[arg(long)]
        relation: Relation,
        #[arg(long, conflicts_with = "elements")]
        all: bool,
        elements: Vec<String>,
    },
    /// Whole-group histogram: figure 5 is word length, figure 6 interval size
    Census {
        #[arg(long, value_parser = ["5", "6"], required_unless_present = "relation")]
        figure: Option<String>,
        #[arg(long, conflicts_with = "figure")]
        relation: Option<Relation>,
    },
    /// Exact medians of three elements
    Median {
        c0: String,
        c1: String,
        c2: String,
        #[arg(long)]
        parity_check: bool,
    },
    /// Symmetries of the generating set
    Normaliser {
        #[arg(long)]
        enumerate: bool,
        /// Elements to test for membership
        elements: Vec<String>,
    },
    /// Distance-table cache files
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    Build,
    Verify,
}

/// Failure carrying the process exit status.
struct Failure {
    status: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Parse(_)
            | Error::ModelMismatch { .. }
            | Error::IndexOutOfRange { .. }
            | Error::NotGenerating(_) => 2,
            Error::Unsupported(_) | Error::Unreachable | Error::NotInNormaliser => 3,
            Error::Cache(_) | Error::Invariant(_) => 4,
            Error::Io(_) => 1,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        status: 2,
        message: message.into(),
    }
}

type Run<T> = std::result::Result<T, Failure>;

struct Ctx {
    model: GroupModel,
    format: Option<Format>,
    cache_dir: Option<PathBuf>,
    cap: usize,
}

impl Ctx {
    fn format(&self, default: Format, allowed: &[Format]) -> Run<Format> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(usage("output format not available for this command"))
        }
    }

    fn parse(&self, text: &str) -> Result<Element> {
        self.model.parse_element(text)
    }

    fn cached_table(&self) -> Result<Option<DistanceTable>> {
        let Some(dir) = &self.cache_dir else {
            return Ok(None);
        };
        let path = cache::cache_path(dir, &self.model);
        if path.exists() {
            let table = cache::read(&path, &self.model)?;
            table.verify(&self.model)?;
            Ok(Some(table))
        } else {
            let table = DistanceTable::build(&self.model)?;
            cache::write(&path, &self.model, &table)?;
            Ok(Some(table))
        }
    }

    fn oracle(&self) -> Result<DistanceOracle> {
        let tabulated = !matches!(self.model.kind(), ModelKind::SymAdjacent(_))
            && self
                .model
                .degree()
                .is_some_and(|n| n <= FULL_TABLE_MAX_DEGREE);
        if tabulated {
            if let Some(table) = self.cached_table()? {
                return DistanceOracle::from_table(self.model.clone(), table);
            }
        }
        DistanceOracle::new(self.model.clone())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.status)
        }
    }
}

fn run(cli: Cli) -> Run<String> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| usage(e.to_string()))?;
    }
    let text = cli.model.ok_or_else(|| usage("--model is required"))?;
    let ctx = Ctx {
        model: text.parse()?,
        format: cli.format,
        cache_dir: cli.cache_dir,
        cap: cli.cap,
    };
    match cli.command {
        Command::Dist { g, h } => dist(&ctx, &g, &h),
        Command::Geodesics { g, h, enumerate } => geodesics(&ctx, &g, &h, enumerate),
        Command::Interval {
            g,
            h,
            stats,
            partial,
        } => interval(&ctx, &g, &h, stats, partial),
        Command::Classify {
            relation,
            all,
            elements,
        } => classify_cmd(&ctx, relation, all, &elements),
        Command::Census { figure, relation } => {
            let relation = match figure.as_deref() {
                Some("5") => Relation::SameLength,
                Some("6") => Relation::SameIntervalSize,
                _ => relation.ok_or_else(|| usage("--figure or --relation is required"))?,
            };
            census_cmd(&ctx, relation)
        }
        Command::Median {
            c0,
            c1,
            c2,
            parity_check,
        } => median_cmd(&ctx, [&c0, &c1, &c2], parity_check),
        Command::Normaliser {
            enumerate,
            elements,
        } => normaliser_cmd(&ctx, enumerate, &elements),
        Command::Cache { action } => cache_cmd(&ctx, action),
    }
}

fn to_json(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable output");
    s.push('\n');
    s
}

fn dist(ctx: &Ctx, g: &str, h: &str) -> Run<String> {
    let format = ctx.format(Format::Text, &[Format::Text, Format::Json])?;
    let (g, h) = (ctx.parse(g)?, ctx.parse(h)?);
    let d = ctx.oracle()?.distance(&g, &h)?;
    Ok(match format {
        Format::Json => to_json(&json!({"g": g, "h": h, "distance": d})),
        _ => format!("{d}\n"),
    })
}

fn word_text(model: &GroupModel, w: &cayley_core::Word) -> Vec<String> {
    let gens = model.generators().generators();
    w.0.iter().map(|&i| gens[i].to_string()).collect()
}

fn geodesics(ctx: &Ctx, g: &str, h: &str, enumerate: bool) -> Run<String> {
    let format = ctx.format(Format::Text, &[Format::Text, Format::Json])?;
    let (g, h) = (ctx.parse(g)?, ctx.parse(h)?);
    let mode = if enumerate {
        GeodesicMode::Enumerate { cap: ctx.cap }
    } else {
        GeodesicMode::CountOnly
    };
    let set = ctx.oracle()?.geodesics(&g, &h, mode)?;
    let words: Vec<Vec<String>> = set.words.iter().map(|w| word_text(&ctx.model, w)).collect();
    Ok(match format {
        Format::Json => to_json(&json!({
            "source": set.source,
            "target": set.target,
            "length": set.length,
            "count": set.count,
            "words": if enumerate { Some(&words) } else { None },
            "truncated": set.truncated,
        })),
        _ => {
            let mut out = format!("length {} count {}\n", set.length, set.count);
            for w in &words {
                out.push_str(&w.join(" "));
                out.push('\n');
            }
            if set.truncated {
                let _ = writeln!(out, "(truncated at {} words)", ctx.cap);
            }
            out
        }
    })
}

fn rank_lines(sets: &[Vec<Element>], label: &str) -> String {
    let mut out = String::new();
    for (i, set) in sets.iter().enumerate() {
        let names: Vec<String> = set.iter().map(Element::to_string).collect();
        let _ = writeln!(out, "{label}{i} [{}]: {}", set.len(), names.join(" "));
    }
    out
}

fn interval(ctx: &Ctx, g: &str, h: &str, stats: bool, partial: Option<usize>) -> Run<String> {
    let (g, h) = (ctx.parse(g)?, ctx.parse(h)?);
    let oracle = ctx.oracle()?;
    if let Some(k) = partial {
        let format = ctx.format(Format::Text, &[Format::Text, Format::Json])?;
        let part = partial_interval(&oracle, &g, &h, k)?;
        return Ok(match format {
            Format::Json => to_json(&part),
            _ => format!(
                "length {}\n{}{}",
                part.length,
                rank_lines(&part.forward, "from bottom "),
                rank_lines(&part.backward, "from top ")
            ),
        });
    }
    let format = ctx.format(Format::Text, &[Format::Text, Format::Json, Format::Dot])?;
    let i = GradedInterval::build(&oracle, &g, &h)?;
    let s = stats.then(|| i.stats());
    let gens = ctx.model.generators();
    Ok(match format {
        Format::Json => to_json(&i.to_json(gens, s.as_ref())),
        Format::Dot => i.to_dot(gens),
        _ => {
            let mut out = format!("length {} size {}\n", i.length(), i.len());
            out.push_str(&rank_lines(i.rank_sets(), "rank "));
            if let Some(s) = s {
                let _ = writeln!(
                    out,
                    "geodesics {}\nrank profile {:?}\nmax antichain {}\nsperner {}\nlattice {}",
                    s.geodesic_count, s.rank_profile, s.max_antichain, s.is_sperner, s.is_lattice
                );
            }
            out
        }
    })
}

fn classify_cmd(ctx: &Ctx, relation: Relation, all: bool, elements: &[String]) -> Run<String> {
    let format = ctx.format(Format::Text, &[Format::Text, Format::Json, Format::Csv])?;
    let items: Vec<Element> = if all {
        ctx.model.elements()?.collect()
    } else if elements.is_empty() {
        return Err(usage("give elements or --all"));
    } else {
        elements
            .iter()
            .map(|e| ctx.parse(e))
            .collect::<Result<_>>()?
    };
    let c = classify(&ctx.oracle()?, &items, relation, ClassifyOptions::default())?;
    Ok(match format {
        Format::Json => to_json(&c),
        Format::Csv => {
            let mut out = String::from("element,class,signature\n");
            for (k, class) in c.classes.iter().enumerate() {
                for x in class {
                    let _ = writeln!(out, "\"{x}\",{k},{}", c.signatures[k]);
                }
            }
            out
        }
        _ => {
            let mut out = String::new();
            for (k, class) in c.classes.iter().enumerate() {
                let names: Vec<String> = class.iter().map(Element::to_string).collect();
                let _ = writeln!(
                    out,
                    "{} [{}]: {}",
                    c.signatures[k],
                    class.len(),
                    names.join(" ")
                );
            }
            for x in &c.unclassified {
                let _ = writeln!(out, "unclassified: {x}");
            }
            out
        }
    })
}

fn census_cmd(ctx: &Ctx, relation: Relation) -> Run<String> {
    let format = ctx.format(Format::Csv, &[Format::Csv, Format::Json])?;
    if !ctx.model.is_symmetric() {
        return Err(Error::Unsupported(format!("census of {}", ctx.model.descriptor())).into());
    }
    let table = census_table(&ctx.model, ctx.cached_table()?)?;
    let c = census(&ctx.model, &table, relation)?;
    Ok(match format {
        Format::Json => to_json(&c),
        _ => c.to_csv(),
    })
}

fn median_cmd(ctx: &Ctx, corners: [&String; 3], parity_check: bool) -> Run<String> {
    let format = ctx.format(Format::Json, &[Format::Json, Format::Dot])?;
    let c: Vec<Element> = corners
        .iter()
        .map(|t| ctx.parse(t))
        .collect::<Result<_>>()?;
    if parity_check && !matches!(ctx.model.kind(), ModelKind::SymCircular(_)) {
        return Err(Error::Unsupported(format!(
            "median parity law applies to sym-circular models, not {}",
            ctx.model.descriptor()
        ))
        .into());
    }
    let oracle = ctx.oracle()?;
    let t = Triangle::new(&ctx.model, &c[0], &c[1], &c[2])?;
    let report = median::median_report(&oracle, &t)?;
    if parity_check && report["parity_ok"] != Value::Bool(true) {
        return Err(
            Error::Invariant(format!("medians at odd distance: {}", report["medians"])).into(),
        );
    }
    Ok(match format {
        Format::Dot => median::median_dot(&oracle, &t)?,
        _ => to_json(&report),
    })
}

fn normaliser_cmd(ctx: &Ctx, enumerate: bool, elements: &[String]) -> Run<String> {
    let format = ctx.format(Format::Text, &[Format::Text, Format::Json])?;
    if !enumerate && elements.is_empty() {
        return Err(usage("give elements to test or --enumerate"));
    }
    let mode = if enumerate {
        NormaliserMode::Enumerate
    } else {
        NormaliserMode::Predicate
    };
    let gens = ctx.model.generators();
    let norm = normaliser(&ctx.model, gens, mode)?;
    let tested: Vec<(Element, bool)> = elements
        .iter()
        .map(|t| {
            let x = ctx.parse(t)?;
            let inside = norm.contains(&x)?;
            Ok((x, inside))
        })
        .collect::<Result<_>>()?;
    let members: Option<Vec<String>> = norm
        .members()
        .map(|m| m.iter().map(Element::to_string).collect());
    Ok(match format {
        Format::Json => {
            let tested: Vec<Value> = tested
                .iter()
                .map(|(x, inside)| json!({"element": x, "member": inside}))
                .collect();
            to_json(&json!({
                "generators": gens.canonical_text(),
                "order": norm.order(),
                "members": members,
                "tested": tested,
            }))
        }
        _ => {
            let mut out = String::new();
            if let Some(m) = &members {
                let _ = writeln!(out, "order {}", m.len());
                for x in m {
                    let _ = writeln!(out, "{x}");
                }
            }
            for (x, inside) in &tested {
                let _ = writeln!(
                    out,
                    "{x} {}",
                    if *inside { "member" } else { "not a member" }
                );
            }
            out
        }
    })
}

fn cache_cmd(ctx: &Ctx, action: CacheAction) -> Run<String> {
    let dir = ctx
        .cache_dir
        .as_ref()
        .ok_or_else(|| usage("--cache-dir or CAYLEY_CACHE_DIR is required"))?;
    if !ctx.model.is_symmetric() {
        return Err(
            Error::Unsupported(format!("cache files for {}", ctx.model.descriptor())).into(),
        );
    }
    let path = cache::cache_path(dir, &ctx.model);
    match action {
        CacheAction::Build => {
            let table = DistanceTable::build(&ctx.model)?;
            cache::write(&path, &ctx.model, &table)?;
            Ok(format!(
                "wrote {} ({} entries)\n",
                path.display(),
                table.len()
            ))
        }
        CacheAction::Verify => {
            let table = cache::read(&path, &ctx.model)?;
            table.verify(&ctx.model)?;
            let spheres = table.sphere_sizes();
            Ok(format!(
                "ok {} ({} entries, diameter {})\n",
                path.display(),
                table.len(),
                spheres.len().saturating_sub(1)
            ))
        }
    }
}
