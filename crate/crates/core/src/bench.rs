//! Algorithm registry and area-scaling sweeps.
//!
//! A sweep draws every (algorithm, model, n, seed) cell, verifies the drawing
//! against the algorithm's criteria, and divides its area by the algorithm's
//! bound shape. The fitted constant of an algorithm is the largest such ratio,
//! so the summary is a certified envelope over the swept cells.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::arbitrary;
use crate::binary;
use crate::drawing::GridDrawing;
use crate::error::{Error, Result};
use crate::logs::{ceil_log2, flog, log_star};
use crate::tree::{generate_tree, Tree, TreeModel};
use crate::verify::{verify_drawing, Criteria};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Standard,
    UpwardGeneral,
    General,
    Orthogonal,
    Order,
    OrthOrder,
}

/// Optional drawer parameters; `None` picks the default for the tree size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Params {
    pub width_budget: Option<usize>,
    pub boot_level: Option<usize>,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Standard,
        Algorithm::UpwardGeneral,
        Algorithm::General,
        Algorithm::Orthogonal,
        Algorithm::Order,
        Algorithm::OrthOrder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Standard => "standard",
            Algorithm::UpwardGeneral => "upward-general",
            Algorithm::General => "general",
            Algorithm::Orthogonal => "orthogonal",
            Algorithm::Order => "order",
            Algorithm::OrthOrder => "orth-order",
        }
    }

    pub fn is_binary(self) -> bool {
        matches!(self, Algorithm::Orthogonal | Algorithm::Order | Algorithm::OrthOrder)
    }

    /// Properties every drawing of this algorithm must have.
    pub fn criteria(self) -> Criteria {
        let p = Criteria::planar();
        match self {
            Algorithm::Standard | Algorithm::UpwardGeneral => p.upward(),
            Algorithm::General => p,
            Algorithm::Orthogonal => p.orthogonal(),
            Algorithm::Order => p.order_preserving(),
            Algorithm::OrthOrder => p.orthogonal().order_preserving(),
        }
    }

    /// Area bound with the constant factor left out.
    pub fn bound(self, n: usize) -> f64 {
        let nf = n as f64;
        let l = flog(nf);
        let ll = flog(l);
        match self {
            Algorithm::Standard => nf * ceil_log2(n).max(1) as f64,
            Algorithm::UpwardGeneral => nf * l.sqrt() * ll * ll,
            Algorithm::General => nf * (5.0 * (ll * flog(ll)).sqrt()).exp2(),
            Algorithm::Orthogonal | Algorithm::Order => nf * (5.0 * log_star(n) as f64).exp2(),
            Algorithm::OrthOrder => nf * (2.0 * l).sqrt().exp2() * l.sqrt(),
        }
    }

    /// Default width budget: `max(1, ceil(log2 n))`, capped at `n`.
    pub fn default_budget(n: usize) -> usize {
        (ceil_log2(n.max(1)) as usize).clamp(1, n.max(1))
    }

    /// Binary drawers that keep the child order need a side on every only
    /// child; unsided ones are taken as left children.
    pub fn prepare(self, tree: &Tree) -> Tree {
        if matches!(self, Algorithm::Order | Algorithm::OrthOrder) && tree.is_binary() {
            tree.with_default_sides()
        } else {
            tree.clone()
        }
    }

    pub fn draw(self, tree: &Tree, params: Params) -> Result<GridDrawing> {
        let n = tree.len();
        let a = params.width_budget.unwrap_or_else(|| Self::default_budget(n));
        match self {
            Algorithm::Standard => Ok(arbitrary::draw_standard(tree, false)),
            Algorithm::UpwardGeneral => arbitrary::draw_upward_general(tree, a),
            Algorithm::General => arbitrary::draw_general_bootstrap(tree, a, params.boot_level),
            Algorithm::Orthogonal => binary::draw_orthogonal_binary(tree),
            Algorithm::Order => binary::draw_order_preserving(tree),
            Algorithm::OrthOrder => binary::draw_orth_order(tree),
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Algorithm> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::ParamOutOfRange(format!("unknown algorithm {s:?}")))
    }
}

/// Sweep description. Text form, one `key = comma list` per line, `#`
/// comments:
///
/// ```text
/// algorithms = standard, orthogonal
/// models = path, random-binary
/// n = 2^8..2^12, 5000
/// seeds = 0..3
/// width-budget = 32
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    pub models: Vec<TreeModel>,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub params: Params,
    /// Worker threads; `0` uses the available parallelism.
    pub threads: usize,
}

fn bad(msg: String) -> Error {
    Error::ParamOutOfRange(msg)
}

fn parse_num(s: &str) -> Result<u64> {
    let v = match s.split_once('^') {
        Some((b, e)) => {
            let b: u64 = b.trim().parse().map_err(|_| bad(format!("bad number {s:?}")))?;
            let e: u32 = e.trim().parse().map_err(|_| bad(format!("bad number {s:?}")))?;
            b.checked_pow(e).ok_or_else(|| bad(format!("{s:?} overflows")))?
        }
        None => s.parse().map_err(|_| bad(format!("bad number {s:?}")))?,
    };
    Ok(v)
}

/// `a..b` with both ends in the same power form steps the exponent
/// (`2^4..2^7`), otherwise it steps by one; ranges are inclusive.
fn parse_nums(list: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let Some((lo, hi)) = item.split_once("..") else {
            out.push(parse_num(item)?);
            continue;
        };
        let (lo, hi) = (lo.trim(), hi.trim());
        match (lo.split_once('^'), hi.split_once('^')) {
            (Some((b1, e1)), Some((b2, e2))) if b1.trim() == b2.trim() => {
                let e1: u32 = e1.trim().parse().map_err(|_| bad(format!("bad range {item:?}")))?;
                let e2: u32 = e2.trim().parse().map_err(|_| bad(format!("bad range {item:?}")))?;
                for e in e1..=e2 {
                    out.push(parse_num(&format!("{b1}^{e}"))?);
                }
            }
            _ => out.extend(parse_num(lo)?..=parse_num(hi)?),
        }
    }
    Ok(out)
}

fn parse_list<T: FromStr<Err = Error>>(list: &str) -> Result<Vec<T>> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(T::from_str).collect()
}

impl FromStr for BenchConfig {
    type Err = Error;
    fn from_str(text: &str) -> Result<BenchConfig> {
        let mut cfg = BenchConfig {
            algorithms: Algorithm::ALL.to_vec(),
            models: TreeModel::ALL.to_vec(),
            sizes: Vec::new(),
            seeds: vec![0],
            params: Params::default(),
            threads: 0,
        };
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, val) = line.split_once('=').ok_or_else(|| bad(format!("expected key = value: {line:?}")))?;
            let val = val.trim();
            let single = |what: &str| -> Result<usize> {
                match parse_nums(val)?.as_slice() {
                    [v] => Ok(*v as usize),
                    _ => Err(bad(format!("{what} takes one value"))),
                }
            };
            match key.trim() {
                "algorithms" => cfg.algorithms = parse_list(val)?,
                "models" => cfg.models = parse_list(val)?,
                "n" => cfg.sizes = parse_nums(val)?.into_iter().map(|v| v as usize).collect(),
                "seeds" => cfg.seeds = parse_nums(val)?,
                "width-budget" => cfg.params.width_budget = Some(single("width-budget")?),
                "boot-level" => cfg.params.boot_level = Some(single("boot-level")?),
                "threads" => cfg.threads = single("threads")?,
                k => return Err(bad(format!("unknown key {k:?}"))),
            }
        }
        if cfg.sizes.is_empty() {
            return Err(bad("no tree sizes given".into()));
        }
        if cfg.sizes.contains(&0) {
            return Err(bad("tree sizes must be positive".into()));
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub model: TreeModel,
    pub seed: u64,
    pub algorithm: Algorithm,
    /// Drawer parameters as reported by the drawer (`A`, `s`, `j`).
    pub params: Vec<(String, String)>,
    pub width: i64,
    pub height: i64,
    pub area: i128,
    pub bound: f64,
    pub ratio: f64,
    pub time: Duration,
    /// Set when the drawer failed or the drawing did not verify; the numeric
    /// fields are then zero.
    pub error: Option<String>,
}

impl BenchRecord {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }

    fn param(&self, key: &str) -> &str {
        self.params.iter().find(|(k, _)| k == key).map_or("-", |(_, v)| v.as_str())
    }
}

/// Draws and verifies one cell.
pub fn run_cell(algorithm: Algorithm, model: TreeModel, n: usize, seed: u64, params: Params) -> BenchRecord {
    let tree = algorithm.prepare(&generate_tree(n, model, seed));
    let start = Instant::now();
    let drawn = algorithm.draw(&tree, params);
    let time = start.elapsed();
    let mut rec = BenchRecord {
        n,
        model,
        seed,
        algorithm,
        params: Vec::new(),
        width: 0,
        height: 0,
        area: 0,
        bound: algorithm.bound(n),
        ratio: 0.0,
        time,
        error: None,
    };
    let d = match drawn {
        Ok(d) => d,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    match verify_drawing(&tree, &d, algorithm.criteria()) {
        Ok(r) if r.passes(algorithm.criteria()) => {}
        Ok(r) => {
            rec.error = Some(format!("verification failed: {:?}", r.first_violation));
            return rec;
        }
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    }
    rec.params = d.meta.iter().filter(|(k, _)| matches!(k.as_str(), "A" | "s" | "j")).cloned().collect();
    rec.width = d.width;
    rec.height = d.height;
    rec.area = d.area();
    rec.ratio = rec.area as f64 / rec.bound;
    rec
}

/// Per-algorithm summary of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchSummary {
    pub algorithm: Algorithm,
    pub cells: usize,
    pub errors: usize,
    /// Max of `area / bound` over the admitted cells.
    pub fitted_c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchTable {
    pub records: Vec<BenchRecord>,
    pub summary: Vec<BenchSummary>,
}

impl BenchTable {
    /// Tab-separated records in config order. Wall times are left out unless
    /// asked for, so that the table is reproducible byte for byte.
    pub fn to_tsv(&self, with_time: bool) -> String {
        let mut s = String::from("algorithm\tmodel\tn\tseed\tA\ts\tj\tW\tH\tarea\tbound\tratio");
        s.push_str(if with_time { "\ttime_ms\terror\n" } else { "\terror\n" });
        for r in &self.records {
            let _ = write!(
                s,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.3}\t{:.6e}",
                r.algorithm.name(),
                r.model.name(),
                r.n,
                r.seed,
                r.param("A"),
                r.param("s"),
                r.param("j"),
                r.width,
                r.height,
                r.area,
                r.bound,
                r.ratio
            );
            if with_time {
                let _ = write!(s, "\t{:.3}", r.time.as_secs_f64() * 1e3);
            }
            let _ = writeln!(s, "\t{}", r.error.as_deref().unwrap_or("-"));
        }
        s
    }

    pub fn summary_text(&self) -> String {
        let mut s = String::from("algorithm\tcells\terrors\tfitted_C\n");
        for x in &self.summary {
            let _ = writeln!(s, "{}\t{}\t{}\t{:.6e}", x.algorithm.name(), x.cells, x.errors, x.fitted_c);
        }
        s
    }
}

/// Worker stack size; the binary drawers recurse along root-to-leaf paths.
pub const STACK: usize = 256 << 20;

/// Runs every cell of `cfg`. Cells run concurrently; the table keeps config
/// order (algorithm, model, n, seed).
pub fn run_benchmark(cfg: &BenchConfig) -> BenchTable {
    let mut cells = Vec::new();
    for &alg in &cfg.algorithms {
        for &model in &cfg.models {
            for &n in &cfg.sizes {
                for &seed in &cfg.seeds {
                    cells.push((alg, model, n, seed));
                }
            }
        }
    }
    let threads = match cfg.threads {
        0 => std::thread::available_parallelism().map_or(1, |p| p.get()),
        t => t,
    }
    .min(cells.len().max(1));
    let slots: Vec<Mutex<Option<BenchRecord>>> = cells.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|sc| {
        for _ in 0..threads {
            std::thread::Builder::new()
                .stack_size(STACK)
                .spawn_scoped(sc, || loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(&(alg, model, n, seed)) = cells.get(i) else { break };
                    let rec = run_cell(alg, model, n, seed, cfg.params);
                    *slots[i].lock().expect("slot lock") = Some(rec);
                })
                .expect("spawn bench worker");
        }
    });
    let records: Vec<BenchRecord> =
        slots.into_iter().map(|m| m.into_inner().expect("slot lock").expect("cell ran")).collect();
    let summary = cfg
        .algorithms
        .iter()
        .map(|&alg| {
            let mine = records.iter().filter(|r| r.algorithm == alg);
            BenchSummary {
                algorithm: alg,
                cells: mine.clone().count(),
                errors: mine.clone().filter(|r| !r.ok()).count(),
                fitted_c: mine.filter(|r| r.ok()).map(|r| r.ratio).fold(0.0, f64::max),
            }
        })
        .collect();
    BenchTable { records, summary }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_lists() {
        assert_eq!(parse_nums("2^3..2^5, 7").unwrap(), vec![8, 16, 32, 7]);
        assert_eq!(parse_nums("0..3").unwrap(), vec![0, 1, 2, 3]);
        assert!(parse_nums("x").is_err());
    }

    #[test]
    fn config_parse() {
        let c: BenchConfig = "algorithms = standard, order\nn = 2^4 # sizes\nseeds = 1,2\nwidth-budget = 5\n"
            .parse()
            .unwrap();
        assert_eq!(c.algorithms, vec![Algorithm::Standard, Algorithm::Order]);
        assert_eq!(c.sizes, vec![16]);
        assert_eq!(c.seeds, vec![1, 2]);
        assert_eq!(c.params.width_budget, Some(5));
        assert_eq!(c.models.len(), 5);
        assert!("n = 0".parse::<BenchConfig>().is_err());
        assert!("colour = red\nn = 4".parse::<BenchConfig>().is_err());
    }

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
    }
}
