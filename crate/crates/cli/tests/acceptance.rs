//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when a criterion fails outside a documented gap.

use std::collections::HashSet;
use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treegrid::bench::{run_benchmark, Algorithm, BenchConfig, Params, STACK};
use treegrid::geometry::{coprime_count, segments_cross, Crossing, GridPoint};
use treegrid::lattice::{extract_affine_grid, ConvexRegion, LatticeBasis};
use treegrid::logs::{ceil_log2, clog, flog, isqrt};
use treegrid::{generate_tree, verify_drawing, Criteria, Tree, TreeModel, VerifyReport};

/// Envelope constants are fitted on cells with `n <= FIT_MAX` and then
/// checked on every cell.
const FIT_MAX: usize = 1 << 13;

struct Outcome {
    pass: bool,
    /// Set when the only failing clause is one recorded as out of reach.
    known_gap: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Outcome {
        Outcome { pass, known_gap: false, detail }
    }
}

fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = std::thread::available_parallelism().map_or(1, |p| p.get()).min(items.len().max(1));
    let slots: Vec<Mutex<Option<R>>> = items.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|sc| {
        for _ in 0..threads {
            std::thread::Builder::new()
                .stack_size(STACK)
                .spawn_scoped(sc, || loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    let Some(x) = items.get(i) else { break };
                    *slots[i].lock().unwrap() = Some(f(x));
                })
                .unwrap();
        }
    });
    slots.into_iter().map(|m| m.into_inner().unwrap().unwrap()).collect()
}

fn all_criteria() -> Criteria {
    Criteria::planar().upward().orthogonal().order_preserving()
}

#[derive(Clone, Copy)]
struct Job {
    alg: Algorithm,
    model: TreeModel,
    n: usize,
    seed: u64,
    budget: Option<usize>,
}

struct Cell {
    job: Job,
    out: Result<VerifyReport, String>,
}

impl Cell {
    fn report(&self) -> Option<&VerifyReport> {
        self.out.as_ref().ok()
    }

    fn label(&self) -> String {
        let j = &self.job;
        format!("{}/{}/n={}/seed={}/A={:?}", j.alg.name(), j.model.name(), j.n, j.seed, j.budget)
    }
}

fn run_job(j: &Job) -> Cell {
    let t = j.alg.prepare(&generate_tree(j.n, j.model, j.seed));
    let out = j
        .alg
        .draw(&t, Params { width_budget: j.budget, boot_level: None })
        .map_err(|e| e.to_string())
        .and_then(|d| verify_drawing(&t, &d, all_criteria()).map_err(|e| e.to_string()));
    Cell { job: *j, out }
}

/// Jobs for every applicable algorithm; binary drawers only see binary trees.
fn jobs(algs: &[Algorithm], models: &[TreeModel], sizes: &[usize], seeds: &[u64], budgets: bool) -> Vec<Job> {
    let mut out = Vec::new();
    for &model in models {
        for &n in sizes {
            for &seed in seeds {
                let binary = generate_tree(n, model, seed).is_binary();
                for &alg in algs {
                    if alg.is_binary() && !binary {
                        continue;
                    }
                    out.push(Job { alg, model, n, seed, budget: None });
                    if budgets && matches!(alg, Algorithm::UpwardGeneral | Algorithm::General) {
                        let a = isqrt(n).max(clog(n)).min(n);
                        out.push(Job { alg, model, n, seed, budget: Some(a) });
                    }
                }
            }
        }
    }
    out
}

fn pow2(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|e| 1usize << e).collect()
}

/// Trees of all five models, seeds 0-9, n in 2^4..2^14, every drawer.
fn corpus() -> &'static [Cell] {
    static C: OnceLock<Vec<Cell>> = OnceLock::new();
    C.get_or_init(|| {
        let seeds: Vec<u64> = (0..10).collect();
        par_map(&jobs(&Algorithm::ALL, &TreeModel::ALL, &pow2(4, 14), &seeds, true), run_job)
    })
}

/// n in 2^10..2^17, seeds 0-2.
fn sweep(algs: &[Algorithm]) -> Vec<Cell> {
    par_map(&jobs(algs, &TreeModel::ALL, &pow2(10, 17), &[0, 1, 2], false), run_job)
}

fn failures(cells: &[Cell], ok: impl Fn(&VerifyReport) -> bool) -> Vec<String> {
    cells
        .iter()
        .filter_map(|c| match &c.out {
            Ok(r) if ok(r) => None,
            Ok(r) => Some(format!("{} ({:?})", c.label(), r.first_violation)),
            Err(e) => Some(format!("{} ({e})", c.label())),
        })
        .collect()
}

fn first(v: &[String]) -> String {
    v.first().cloned().unwrap_or_default()
}

struct Envelope {
    c: f64,
    /// Max ratio over every cell.
    c_all: f64,
    violations: Vec<String>,
}

/// Fits `C = max value/bound` over cells with `n <= FIT_MAX`, then checks
/// `value <= C·bound` on all cells.
fn envelope(points: &[(String, usize, f64, f64)]) -> Envelope {
    let c = points.iter().filter(|p| p.1 <= FIT_MAX).map(|p| p.2 / p.3).fold(0.0, f64::max);
    let violations = points
        .iter()
        .filter(|p| p.2 > c * p.3 * (1.0 + 1e-12))
        .map(|p| format!("{} value {} > C·bound {:.1}", p.0, p.2, c * p.3))
        .collect();
    let c_all = points.iter().map(|p| p.2 / p.3).fold(0.0, f64::max);
    Envelope { c, c_all, violations }
}

fn area_points(cells: &[Cell]) -> Vec<(String, usize, f64, f64)> {
    cells
        .iter()
        .filter_map(|c| c.report().map(|r| (c.label(), c.job.n, r.area as f64, c.job.alg.bound(c.job.n))))
        .collect()
}

// ---------------------------------------------------------------------------

fn c1_planarity() -> Outcome {
    let cells = corpus();
    let bad = failures(cells, |r| r.planar);
    Outcome::new(bad.is_empty(), format!("{} cells, {} non-planar or failed {}", cells.len(), bad.len(), first(&bad)))
}

fn c2_standard_caps() -> Outcome {
    let mut jobs = Vec::new();
    for model in TreeModel::ALL {
        for seed in 0..200u64 {
            jobs.push((model, seed, 2 + (seed as usize * 7919) % 4095));
        }
    }
    let bad: Vec<String> = par_map(&jobs, |&(model, seed, n)| {
        let t = generate_tree(n, model, seed);
        let d = Algorithm::Standard.draw(&t, Params::default()).unwrap();
        let r = verify_drawing(&t, &d, Criteria::planar().upward()).unwrap();
        let cap = ceil_log2(n) as i64;
        (d.width > n as i64 || d.height > cap || !r.upward || !r.planar)
            .then(|| format!("{}/{n}/{seed}: W={} H={} upward={}", model.name(), d.width, d.height, r.upward))
    })
    .into_iter()
    .flatten()
    .collect();
    Outcome::new(bad.is_empty(), format!("{} trees, {} violations {}", jobs.len(), bad.len(), first(&bad)))
}

fn c3_coprime_density() -> Outcome {
    const M: usize = 256;
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    // q[a][y] = #{(x, y') : x <= a, y' <= y, gcd(x, y') = 1}
    let mut q = vec![vec![0u64; M + 1]; M + 1];
    for a in 1..=M {
        for y in 1..=M {
            q[a][y] = q[a - 1][y] + q[a][y - 1] - q[a - 1][y - 1] + u64::from(gcd(a, y) == 1);
        }
    }
    let count = |a: usize, b: usize| q[a][b] - q[a][b / 2];
    let mut worst = f64::INFINITY;
    let mut bad = 0;
    for a in 1..=M {
        for b in 1..=M {
            let c = count(a, b);
            worst = worst.min(c as f64 / (a * b) as f64);
            if c * 1000 < 47 * (a * b) as u64 {
                bad += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mismatch = (0..500)
        .map(|_| (rng.gen_range(1..=M), rng.gen_range(1..=M)))
        .chain([(1, 1), (M, M), (1, M), (M, 1)])
        .filter(|&(a, b)| coprime_count(a as i64, b as i64, true) as u64 != count(a, b))
        .count();
    Outcome::new(
        bad == 0 && mismatch == 0,
        format!("{} pairs, min density {worst:.4}, {bad} below 0.047, library count mismatches {mismatch}", M * M),
    )
}

fn in_lattice(p: (i64, i64), u: (i64, i64), v: (i64, i64)) -> bool {
    let d = u.0 * v.1 - u.1 * v.0;
    let i = p.0 * v.1 - p.1 * v.0;
    let j = u.0 * p.1 - u.1 * p.0;
    i % d == 0 && j % d == 0
}

/// Largest `a × b` grid inside `set` with steps taken from point differences.
fn best_grid(set: &HashSet<(i64, i64)>) -> usize {
    let pts: Vec<(i64, i64)> = set.iter().copied().collect();
    let run = |p: (i64, i64), u: (i64, i64), len_cap: usize| {
        let mut k = 0;
        while k < len_cap && set.contains(&(p.0 + k as i64 * u.0, p.1 + k as i64 * u.1)) {
            k += 1;
        }
        k
    };
    let mut best = usize::from(!pts.is_empty());
    for &p in &pts {
        // a grid with origin p steps to other points of the set
        let diffs: Vec<(i64, i64)> = pts.iter().map(|q| (q.0 - p.0, q.1 - p.1)).filter(|d| *d != (0, 0)).collect();
        for &u in &diffs {
            let a = run(p, u, usize::MAX);
            best = best.max(a);
            for &v in &diffs {
                if u.0 * v.1 == u.1 * v.0 {
                    continue;
                }
                let mut w = a;
                let mut b = 0;
                while w > 0 {
                    let q = (p.0 + b as i64 * v.0, p.1 + b as i64 * v.1);
                    w = w.min(run(q, u, w));
                    if w == 0 {
                        break;
                    }
                    b += 1;
                    best = best.max(w * b);
                }
            }
        }
    }
    best
}

fn c4_affine_grid() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut done, mut bad, mut small, mut tries) = (0, Vec::new(), 0, 0);
    let mut worst = f64::INFINITY;
    while done < 500 && tries < 200_000 {
        tries += 1;
        let span = rng.gen_range(4..40);
        let k = rng.gen_range(3..8);
        let raw: Vec<(i64, i64)> = (0..k).map(|_| (rng.gen_range(0..=span), rng.gen_range(0..=span))).collect();
        let Ok(s) = ConvexRegion::hull(&raw) else { continue };
        let u = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        let v = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        if u.0 * v.1 == u.1 * v.0 {
            continue;
        }
        let set: HashSet<(i64, i64)> = (0..=span)
            .flat_map(|x| (0..=span).map(move |y| (x, y)))
            .filter(|&p| in_lattice(p, u, v) && s.contains_point(GridPoint::new(p.0, p.1)))
            .collect();
        if set.len() < 10 {
            continue;
        }
        done += 1;
        let lat = LatticeBasis::integer(u, v).unwrap();
        let g = match extract_affine_grid(&s, &lat) {
            Ok(g) => g,
            Err(e) => {
                bad.push(format!("extraction failed: {e}"));
                continue;
            }
        };
        let pts = g.points();
        let distinct: HashSet<_> = pts.iter().map(|p| (p.x, p.y)).collect();
        worst = worst.min(g.size() as f64 / set.len() as f64);
        if g.size() * 64 < set.len() || distinct.len() != pts.len() || !distinct.is_subset(&set) {
            bad.push(format!("grid {}x{} for {} points, inside={}", g.a, g.b, set.len(), distinct.is_subset(&set)));
        }
        if set.len() <= 40 {
            small += 1;
            let b = best_grid(&set);
            if b * 64 < set.len() || g.size() > b {
                bad.push(format!("oracle best {b} vs extracted {} for {} points", g.size(), set.len()));
            }
        }
    }
    Outcome::new(
        bad.is_empty() && done == 500,
        format!("{done} regions ({small} brute-forced), min ab/|S∩Λ| {worst:.3}, {} failures {}", bad.len(), first(&bad)),
    )
}

fn c5_upward_general() -> Outcome {
    let cells = sweep(&[Algorithm::Standard, Algorithm::UpwardGeneral]);
    let (std_cells, up): (Vec<&Cell>, Vec<&Cell>) = cells.iter().partition(|c| c.job.alg == Algorithm::Standard);
    let up: Vec<Cell> = up.into_iter().map(|c| Cell { job: c.job, out: c.out.clone() }).collect();
    let bad = failures(&up, |r| r.planar && r.upward);
    let env = envelope(&area_points(&up));
    let top = 1usize << 17;
    let worst = |cs: &[&Cell]| {
        cs.iter()
            .filter(|c| c.job.n == top)
            .filter_map(|c| c.report())
            .map(|r| r.area as f64 / (top as f64 * 17.0))
            .fold(0.0, f64::max)
    };
    let rs = worst(&std_cells);
    let ru = worst(&up.iter().collect::<Vec<_>>());
    let ratio_ok = ru <= 0.75 * rs;
    Outcome::new(
        bad.is_empty() && env.violations.is_empty() && ratio_ok,
        format!(
            "{} cells, C={:.4} ({} above envelope {}), worst area/(n log n) at 2^17: upward {ru:.4} vs standard {rs:.4} (x{:.3}, need <= 0.75){}",
            up.len(),
            env.c,
            env.violations.len(),
            first(&env.violations),
            ru / rs,
            if bad.is_empty() { String::new() } else { format!(", {} bad drawings {}", bad.len(), first(&bad)) }
        ),
    )
}

fn c6_general() -> Outcome {
    let cells = sweep(&[Algorithm::General]);
    let bad = failures(&cells, |r| r.planar);
    let env = envelope(&area_points(&cells));
    Outcome::new(
        bad.is_empty() && env.violations.is_empty(),
        format!(
            "{} cells, C={:.3e}, {} above envelope {}, {} non-planar {}",
            cells.len(),
            env.c,
            env.violations.len(),
            first(&env.violations),
            bad.len(),
            first(&bad)
        ),
    )
}

/// Largest over binary models of mean area/n at 2^17 over mean at 2^10.
fn growth(cells: &[Cell]) -> (f64, String) {
    let mut worst = (0.0, String::new());
    for model in TreeModel::ALL {
        let mean = |n: usize| {
            let v: Vec<f64> = cells
                .iter()
                .filter(|c| c.job.model == model && c.job.n == n)
                .filter_map(|c| c.report())
                .map(|r| r.area as f64 / n as f64)
                .collect();
            (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
        };
        if let (Some(lo), Some(hi)) = (mean(1 << 10), mean(1 << 17)) {
            if hi / lo > worst.0 {
                worst = (hi / lo, format!("{}: {lo:.2} -> {hi:.2}", model.name()));
            }
        }
    }
    worst
}

/// Envelope plus near-linear growth, shared by the two binary area criteria.
fn binary_area(alg: Algorithm, extra: &[Cell], ok: impl Fn(&VerifyReport) -> bool + Copy) -> Outcome {
    let cells = sweep(&[alg]);
    let mut bad = failures(&cells, ok);
    bad.extend(failures(extra, ok));
    let env = envelope(&area_points(&cells));
    let (g, which) = growth(&cells);
    // both area clauses measure growth of area/n inside one log* band
    let area_ok = g <= 1.1 && env.violations.is_empty();
    Outcome {
        pass: bad.is_empty() && area_ok,
        known_gap: bad.is_empty() && !area_ok,
        detail: format!(
            "{} sweep + {} corpus cells, {} bad {}; C={:.3e} (all cells {:.3e}), {} above envelope {}; area/n growth 2^10->2^17 x{g:.3} ({which}), need <= 1.1",
            cells.len(),
            extra.len(),
            bad.len(),
            first(&bad),
            env.c,
            env.c_all,
            env.violations.len(),
            first(&env.violations)
        ),
    }
}

fn corpus_of(alg: Algorithm) -> Vec<Cell> {
    corpus().iter().filter(|c| c.job.alg == alg).map(|c| Cell { job: c.job, out: c.out.clone() }).collect()
}

fn c7_orthogonal() -> Outcome {
    binary_area(Algorithm::Orthogonal, &corpus_of(Algorithm::Orthogonal), |r| r.planar && r.orthogonal)
}

fn c8_order() -> Outcome {
    binary_area(Algorithm::Order, &corpus_of(Algorithm::Order), |r| r.planar && r.order_preserving)
}

fn c9_orth_order() -> Outcome {
    let mut cells = corpus_of(Algorithm::OrthOrder);
    cells.extend(sweep(&[Algorithm::OrthOrder]));
    let bad = failures(&cells, |r| r.planar && r.orthogonal && r.order_preserving);
    let tall: Vec<String> = cells
        .iter()
        .filter(|c| c.report().is_some_and(|r| r.height > c.job.n as i64))
        .map(Cell::label)
        .collect();
    let pts: Vec<_> = cells
        .iter()
        .filter_map(|c| {
            let l = flog(c.job.n as f64);
            c.report().map(|r| (c.label(), c.job.n, r.width as f64, (2.0 * l).sqrt().exp2() * l.sqrt()))
        })
        .collect();
    let env = envelope(&pts);
    Outcome::new(
        bad.is_empty() && tall.is_empty() && env.violations.is_empty(),
        format!(
            "{} cells, {} bad {}, {} with H > n, width C={:.4}, {} above envelope {}",
            cells.len(),
            bad.len(),
            first(&bad),
            tall.len(),
            env.c,
            env.violations.len(),
            first(&env.violations)
        ),
    )
}

type R = Ratio<i128>;

/// Independent check: do the closed segments `ab` and `cd` meet anywhere
/// other than at a common endpoint?
fn oracle_meet(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> bool {
    let r = |x: i64| R::from_integer(x as i128);
    let cr = |p: (R, R), q: (R, R)| p.0 * q.1 - p.1 * q.0;
    let pt = |p: (i64, i64)| (r(p.0), r(p.1));
    let (pa, pb, pc, pd) = (pt(a), pt(b), pt(c), pt(d));
    let e1 = (pb.0 - pa.0, pb.1 - pa.1);
    let e2 = (pd.0 - pc.0, pd.1 - pc.1);
    let w = (pc.0 - pa.0, pc.1 - pa.1);
    let zero = R::from_integer(0);
    let one = R::from_integer(1);
    let shared = |t: R| {
        let p = (pa.0 + t * e1.0, pa.1 + t * e1.1);
        (p == pa || p == pb) && (p == pc || p == pd)
    };
    let den = cr(e1, e2);
    if den != zero {
        let t = cr(w, e2) / den;
        let u = cr(w, e1) / den;
        return t >= zero && t <= one && u >= zero && u <= one && !shared(t);
    }
    if cr(w, e1) != zero {
        return false;
    }
    let len = e1.0 * e1.0 + e1.1 * e1.1;
    let proj = |p: (R, R)| ((p.0 - pa.0) * e1.0 + (p.1 - pa.1) * e1.1) / len;
    let (tc, td) = (proj(pc), proj(pd));
    let lo = tc.min(td).max(zero);
    let hi = tc.max(td).min(one);
    if lo > hi {
        false
    } else if lo < hi {
        true
    } else {
        !shared(lo)
    }
}

fn oracle_planar(t: &Tree, pos: &[GridPoint]) -> bool {
    let seg = |v: usize| {
        let p = pos[t.parent(v).unwrap()];
        ((p.x, p.y), (pos[v].x, pos[v].y))
    };
    (1..t.len()).all(|i| {
        let (a, b) = seg(i);
        (i + 1..t.len()).all(|j| {
            let (c, d) = seg(j);
            !oracle_meet(a, b, c, d)
        })
    })
}

fn c10_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut pair_bad = Vec::new();
    let mut hits = 0;
    let p = |rng: &mut ChaCha8Rng| GridPoint::new(rng.gen_range(0..7), rng.gen_range(0..7));
    let mut done = 0;
    while done < 100_000 {
        let (a, b, c, d) = (p(&mut rng), p(&mut rng), p(&mut rng), p(&mut rng));
        if a == b || c == d {
            continue;
        }
        done += 1;
        let lib = matches!(segments_cross((a, b), (c, d)).unwrap(), Crossing::ProperCrossing | Crossing::Improper);
        let ora = oracle_meet((a.x, a.y), (b.x, b.y), (c.x, c.y), (d.x, d.y));
        hits += usize::from(ora);
        if lib != ora && pair_bad.len() < 3 {
            pair_bad.push(format!("{a:?}{b:?} vs {c:?}{d:?}: verifier {lib}, oracle {ora}"));
        }
    }
    let mut drawings = Vec::new();
    for i in 0..100u64 {
        let model = TreeModel::ALL[i as usize % 5];
        let n = 1usize << (4 + i % 5);
        let t = generate_tree(n, model, i / 5);
        let algs: Vec<Algorithm> =
            Algorithm::ALL.into_iter().filter(|a| !a.is_binary() || t.is_binary()).collect();
        let alg = algs[(i / 5) as usize % algs.len()];
        drawings.push((alg, alg.prepare(&t), i));
    }
    let results: Vec<(usize, usize, Option<String>)> = par_map(&drawings, |(alg, t, i)| {
        let d = alg.draw(t, Params::default()).unwrap();
        let mut checks = vec![d.clone()];
        let mut rng = ChaCha8Rng::seed_from_u64(*i);
        let taken: HashSet<GridPoint> = d.pos.iter().copied().collect();
        let mut moved = d.clone();
        loop {
            let q = GridPoint::new(rng.gen_range(1..=d.width), rng.gen_range(1..=d.height));
            if !taken.contains(&q) {
                let v = rng.gen_range(0..t.len());
                moved.pos[v] = q;
                break;
            }
            if taken.len() as i64 >= d.width * d.height {
                break;
            }
        }
        checks.push(moved);
        let mut nonplanar = 0;
        for g in &checks {
            let lib = verify_drawing(t, g, Criteria::planar()).unwrap().planar;
            let ora = oracle_planar(t, &g.pos);
            nonplanar += usize::from(!ora);
            if lib != ora {
                return (checks.len(), nonplanar, Some(format!("{} drawing {i}: verifier {lib}, oracle {ora}", alg.name())));
            }
        }
        (checks.len(), nonplanar, None)
    });
    let total: usize = results.iter().map(|r| r.0).sum();
    let nonplanar: usize = results.iter().map(|r| r.1).sum();
    let draw_bad: Vec<String> = results.into_iter().filter_map(|r| r.2).collect();
    Outcome::new(
        pair_bad.is_empty() && draw_bad.is_empty(),
        format!(
            "100000 segment pairs ({hits} meeting), {} disagreements {}; {total} drawings ({nonplanar} non-planar), {} disagreements {}",
            pair_bad.len(),
            first(&pair_bad),
            draw_bad.len(),
            first(&draw_bad)
        ),
    )
}

fn scratch(name: &str) -> PathBuf {
    let d = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance").join(name);
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

/// Stdout, exit code and every file written by one CLI run.
type RunOutput = (Vec<u8>, Option<i32>, Vec<(String, Vec<u8>)>);

/// Runs the CLI in `dir`.
fn cli_run(dir: &PathBuf, args: &[&str]) -> RunOutput {
    let out = Command::new(env!("CARGO_BIN_EXE_treegrid")).args(args).current_dir(dir).output().unwrap();
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x != "tree" && x != "cfg"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    for (name, _) in &files {
        fs::remove_file(dir.join(name)).unwrap();
    }
    (out.stdout, out.status.code(), files)
}

fn c11_determinism() -> Outcome {
    let dir = scratch("determinism");
    fs::write(dir.join("t.tree"), "((()())(()(()())))").unwrap();
    fs::write(
        dir.join("b.cfg"),
        "algorithms = standard, upward-general, general, orthogonal, order, orth-order\nn = 2^6..2^10\nseeds = 0..1\n",
    )
    .unwrap();
    let mut invocations: Vec<Vec<String>> = Vec::new();
    for alg in Algorithm::ALL {
        for input in ["--generate=random-binary:3000:7", "--in=t.tree", "--generate=path:500:1"] {
            invocations.push(
                ["draw", &format!("--algo={}", alg.name()), input, "--out-tsv=d.tsv", "--out-svg=d.svg"]
                    .map(String::from)
                    .to_vec(),
            );
        }
    }
    invocations.push(vec!["--algo=general".into(), "--generate=uniform-attachment:4000:3".into(), "--width-budget=40".into(), "--boot-level=3".into(), "--out-tsv=g.tsv".into()]);
    invocations.push(vec!["--bench=b.cfg".into()]);
    invocations.push(vec!["--bench=b.cfg".into(), "--out-tsv=bench.tsv".into()]);
    let mut bad = Vec::new();
    let mut bytes = 0;
    for args in &invocations {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let first_run = cli_run(&dir, &args);
        let second = cli_run(&dir, &args);
        bytes += first_run.0.len() + first_run.2.iter().map(|f| f.1.len()).sum::<usize>();
        if first_run.1 != Some(0) {
            bad.push(format!("{args:?} exited {:?}", first_run.1));
        } else if first_run != second {
            bad.push(format!("{args:?} differs between runs"));
        }
    }
    let cfg: BenchConfig = "n = 2^5..2^8\nseeds = 0..2\n".parse().unwrap();
    let a = run_benchmark(&BenchConfig { threads: 1, ..cfg.clone() });
    let b = run_benchmark(&BenchConfig { threads: 8, ..cfg });
    if a.to_tsv(false) != b.to_tsv(false) || a.summary_text() != b.summary_text() {
        bad.push("in-process benchmark differs across thread counts".into());
    }
    Outcome::new(
        bad.is_empty(),
        format!("{} CLI invocations run twice ({bytes} bytes compared), in-process sweep at 1 and 8 threads; {} mismatches {}", invocations.len(), bad.len(), first(&bad)),
    )
}

fn main() {
    type Check = (u32, &'static str, fn() -> Outcome);
    let criteria: [Check; 11] = [
        (1, "universal planarity", c1_planarity),
        (2, "standard algorithm caps", c2_standard_caps),
        (3, "half-band coprime density", c3_coprime_density),
        (4, "affine grid extraction", c4_affine_grid),
        (5, "upward general envelope", c5_upward_general),
        (6, "bootstrapped general envelope", c6_general),
        (7, "orthogonal binary", c7_orthogonal),
        (8, "order-preserving binary", c8_order),
        (9, "orthogonal order-preserving", c9_orth_order),
        (10, "verifier vs independent oracle", c10_oracle),
        (11, "determinism", c11_determinism),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = Vec::new();
    println!("acceptance criteria (envelopes fitted on n <= {FIT_MAX}, checked on every cell)");
    for (id, name, f) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let o = f();
        let status = match (o.pass, o.known_gap) {
            (true, _) => "PASS",
            (false, true) => "FAIL (documented gap)",
            (false, false) => "FAIL",
        };
        println!("criterion {id:>2} {name}: {status} [{:.1}s] {}", start.elapsed().as_secs_f64(), o.detail);
        if !o.pass && !o.known_gap {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
