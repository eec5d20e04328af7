//! Grid execution on a worker pool, resumable partial output, and the
//! result/metadata/plot files.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Map, Value as Json};

use crate::config::{Format, SweepConfig, Task};
use crate::plot::plot_script;
use crate::tasks::{evaluate, value_columns, Value};

pub const CSV_FILE: &str = "results.csv";
pub const JSON_FILE: &str = "results.json";
pub const PART_FILE: &str = "results.part";
pub const META_FILE: &str = "meta.json";
pub const PLOT_FILE: &str = "plot.py";

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub task: Task,
    pub out_dir: PathBuf,
    pub workers: Option<usize>,
    pub resume: bool,
    pub format: Format,
    pub plot: bool,
    /// Recorded in the metadata; no computation is random.
    pub seed: Option<u64>,
}

impl RunOptions {
    /// Options taken from the config's `[output]` and `[numerics]` sections.
    pub fn from_config(config: &SweepConfig, task: Task) -> Self {
        RunOptions {
            task,
            out_dir: PathBuf::from(&config.output.dir),
            workers: config.numerics.workers,
            resume: false,
            format: config.output.format,
            plot: config.output.plot,
            seed: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub n_points: usize,
    pub computed: usize,
    pub resumed: usize,
    pub failed: usize,
    pub failure_fraction: f64,
    /// `validate` only: largest backend disagreement in units of `ω`.
    pub max_disagreement: Option<f64>,
    pub result_file: PathBuf,
}

/// Text of one cell. Floats use the shortest representation that parses
/// back to the same value.
pub fn format_value(v: &Value) -> String {
    match v {
        Value::Int(i) => i.to_string(),
        Value::Float(x) => format!("{x:?}"),
        Value::Bool(b) => b.to_string(),
        Value::Text(s) => s.clone(),
    }
}

fn header(config: &SweepConfig, task: Task) -> Vec<String> {
    let mut cols: Vec<String> = ["ix", "iy", "x", "y"].iter().map(|s| s.to_string()).collect();
    cols.extend(value_columns(config, task));
    cols
}

type Key = (usize, usize);

fn row_cells(config: &SweepConfig, task: Task, key: Key, xs: &[f64], ys: &[f64]) -> Vec<String> {
    let (ix, iy) = key;
    let (x, y) = (xs[ix], ys[iy]);
    let mut cells = vec![
        ix.to_string(),
        iy.to_string(),
        format_value(&Value::Float(x)),
        format_value(&Value::Float(y)),
    ];
    cells.extend(evaluate(config, task, x, y).iter().map(format_value));
    cells
}

fn parse_key(cells: &[String]) -> Option<Key> {
    Some((cells.first()?.parse().ok()?, cells.get(1)?.parse().ok()?))
}

/// Completed rows found in `path` whose layout matches `columns`. The first
/// line must equal `first_line`; incomplete trailing lines are ignored.
fn read_rows(path: &Path, first_line: &str, columns: usize, skip: usize) -> BTreeMap<Key, Vec<String>> {
    let mut rows = BTreeMap::new();
    let Ok(file) = File::open(path) else { return rows };
    let text = match io::read_to_string(file) {
        Ok(t) => t,
        Err(_) => return rows,
    };
    let mut lines = text.split_inclusive('\n');
    if lines.next().map(|l| l.trim_end_matches('\n')) != Some(first_line) {
        return rows;
    }
    for line in lines.skip(skip) {
        let Some(line) = line.strip_suffix('\n') else { break };
        let cells: Vec<String> = line.split(',').map(str::to_string).collect();
        if cells.len() != columns {
            continue;
        }
        if let Some(key) = parse_key(&cells) {
            rows.insert(key, cells);
        }
    }
    rows
}

fn stored_hash(out_dir: &Path) -> Option<String> {
    let meta: Json = serde_json::from_reader(BufReader::new(File::open(out_dir.join(META_FILE)).ok()?)).ok()?;
    meta.get("config_hash")?.as_str().map(str::to_string)
}

fn cell_json(cell: &str) -> Json {
    if let Ok(i) = cell.parse::<i64>() {
        return json!(i);
    }
    if let Ok(x) = cell.parse::<f64>() {
        // NaN and infinities become null
        return serde_json::Number::from_f64(x).map_or(Json::Null, Json::Number);
    }
    match cell {
        "true" => Json::Bool(true),
        "false" => Json::Bool(false),
        _ => Json::String(cell.to_string()),
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(tmp, path)
}

fn render(columns: &[String], rows: &BTreeMap<Key, Vec<String>>, format: Format) -> Vec<u8> {
    match format {
        Format::Csv => {
            let mut out = columns.join(",");
            out.push('\n');
            for cells in rows.values() {
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out.into_bytes()
        }
        Format::Json => {
            let rows: Vec<Json> = rows
                .values()
                .map(|cells| {
                    let obj: Map<String, Json> = columns
                        .iter()
                        .zip(cells)
                        .map(|(c, v)| (c.clone(), cell_json(v)))
                        .collect();
                    Json::Object(obj)
                })
                .collect();
            let doc = json!({ "columns": columns, "rows": rows });
            let mut bytes = serde_json::to_vec_pretty(&doc).expect("json serializes");
            bytes.push(b'\n');
            bytes
        }
    }
}

/// Runs `options.task` over the grid of `config` and writes the output files.
///
/// Rows are keyed by `(ix, iy)` and written in that order whatever the
/// completion order. Finished rows are appended to a partial file as they
/// arrive; with `resume` they are picked up from there (or from a finished
/// result of the same config) instead of being recomputed.
pub fn run(config: &SweepConfig, options: &RunOptions) -> io::Result<RunSummary> {
    let started = Instant::now();
    let task = options.task;
    let dir = &options.out_dir;
    fs::create_dir_all(dir)?;
    let columns = header(config, task);
    let header_line = columns.join(",");
    let hash = config.hash();
    let stamp = format!("# {} {hash}", task.name());
    let part_path = dir.join(PART_FILE);

    let mut done = BTreeMap::new();
    if options.resume {
        done = read_rows(&part_path, &stamp, columns.len(), 1);
        if stored_hash(dir).as_deref() == Some(hash.as_str()) {
            done.extend(read_rows(&dir.join(CSV_FILE), &header_line, columns.len(), 0));
        }
    }
    let resumed = done.len();

    let xs = config.grid.x.values();
    let ys = config.grid.y.values();
    let pending: Vec<Key> = (0..xs.len())
        .flat_map(|ix| (0..ys.len()).map(move |iy| (ix, iy)))
        .filter(|k| !done.contains_key(k))
        .collect();

    let mut part = File::create(&part_path)?;
    writeln!(part, "{stamp}\n{header_line}")?;
    for cells in done.values() {
        writeln!(part, "{}", cells.join(","))?;
    }
    part.flush()?;
    let part = Mutex::new(OpenOptions::new().append(true).open(&part_path)?);

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = options.workers {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(io::Error::other)?;
    let computed: Vec<io::Result<(Key, Vec<String>)>> = pool.install(|| {
        pending
            .par_iter()
            .map(|&key| {
                let cells = row_cells(config, task, key, &xs, &ys);
                let mut f = part.lock().expect("partial file lock");
                writeln!(f, "{}", cells.join(","))?;
                f.flush()?;
                Ok((key, cells))
            })
            .collect()
    });
    for row in computed {
        let (key, cells) = row?;
        done.insert(key, cells);
    }

    let status_col = columns.len() - 1;
    let failed = done.values().filter(|c| c[status_col] != "ok").count();
    let n_points = done.len();
    let failure_fraction = if n_points == 0 {
        0.0
    } else {
        failed as f64 / n_points as f64
    };
    let max_disagreement = (task == Task::Validate).then(|| {
        let col = columns.iter().position(|c| c == "max_diff").expect("validate column");
        done.values()
            .filter_map(|c| c[col].parse::<f64>().ok())
            .fold(0.0, f64::max)
    });

    let (file_name, format) = match options.format {
        Format::Csv => (CSV_FILE, Format::Csv),
        Format::Json => (JSON_FILE, Format::Json),
    };
    let result_file = dir.join(file_name);
    write_atomic(&result_file, &render(&columns, &done, format))?;
    drop(part);
    fs::remove_file(&part_path)?;
    if options.plot {
        write_atomic(
            &dir.join(PLOT_FILE),
            plot_script(config, task, &columns, file_name, format).as_bytes(),
        )?;
    }

    let summary = RunSummary {
        n_points,
        computed: pending.len(),
        resumed,
        failed,
        failure_fraction,
        max_disagreement,
        result_file,
    };
    let meta = json!({
        "tool": "floquet-sweep",
        "version": env!("CARGO_PKG_VERSION"),
        "core_version": floquet_core::VERSION,
        "task": task.name(),
        "config_hash": hash,
        "config": config,
        "seed": options.seed,
        "format": file_name,
        "workers": options.workers.unwrap_or_else(|| pool.current_num_threads()),
        "grid": { "x_points": xs.len(), "y_points": ys.len(), "points": xs.len() * ys.len() },
        "columns": columns,
        "timings": { "wall_seconds": started.elapsed().as_secs_f64() },
        "summary": {
            "computed": summary.computed,
            "resumed": summary.resumed,
            "failed": summary.failed,
            "failure_fraction": summary.failure_fraction,
            "max_disagreement": summary.max_disagreement,
        },
    });
    let mut bytes = serde_json::to_vec_pretty(&meta).expect("json serializes");
    bytes.push(b'\n');
    write_atomic(&dir.join(META_FILE), &bytes)?;
    Ok(summary)
}

/// Header and data lines of a finished CSV, for callers that inspect results.
pub fn read_csv(path: &Path) -> io::Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut lines = BufReader::new(File::open(path)?).lines();
    let header = match lines.next() {
        Some(l) => l?.split(',').map(str::to_string).collect(),
        None => Vec::new(),
    };
    let mut rows = Vec::new();
    for line in lines {
        rows.push(line?.split(',').map(str::to_string).collect());
    }
    Ok((header, rows))
}
