//! End-to-end acceptance checks, one PASS/FAIL line each.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use cyclecx::cobordism::{compose, CobordismCycle, CobordismPiece};
use cyclecx::configuration::EmbeddedConfiguration;
use cyclecx::dual_graph::Phase;
use cyclecx::enumeration::{are_adjacent, build_subcomplex, enumerate_cycles, enumerate_vertices, from_key, realize, Adjacency};
use cyclecx::error::{CobordismError, ReductionError};
use cyclecx::homology::HomologyClass;
use cyclecx::multicurve::OrientedMulticurve;
use cyclecx::rational::Rational;
use cyclecx::surface::CombinatorialSurface;
use cyclecx::surgery::SurgeryState;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn surface(g: usize) -> Arc<CombinatorialSurface> {
    Arc::new(CombinatorialSurface::standard(g))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn torus_uniqueness() -> Outcome {
    let s = surface(1);
    let mut n = 0;
    for p in -3i64..=3 {
        for q in -3i64..=3 {
            if p == 0 && q == 0 {
                continue;
            }
            let x = HomologyClass(vec![p, q]);
            let v = enumerate_vertices(&s, &x, 12).map_err(|e| format!("{x}: {e}"))?;
            ensure!(v.len() == 1, "class {x} has {} vertices", v.len());
            let c = from_key(s.clone(), &v[0]).map_err(|e| e.to_string())?;
            let d = gcd(p, q);
            ensure!(c.homology_class() == x, "class {x} came back as {}", c.homology_class());
            ensure!(c.num_components() as i64 == d, "class {x}: {} components, expected {d}", c.num_components());
            let unit = HomologyClass(vec![p / d, q / d]);
            for i in 0..c.num_components() {
                ensure!(c.component_class(i) == unit, "class {x}: component {i} is {}", c.component_class(i));
            }
            ensure!(c.families().len() == 1, "class {x}: copies are not parallel");
            n += 1;
        }
    }
    Ok(format!("{n} classes, one vertex each"))
}

fn null_not_reduced() -> Outcome {
    let mut checked = [0usize; 3];
    for g in [1, 2] {
        let s = surface(g);
        for w in weight_vectors(&s, 8) {
            let c0 = OrientedMulticurve::positive(s.clone(), &w).map_err(|e| e.to_string())?;
            for o in sign_vectors(c0.num_components()) {
                let c = OrientedMulticurve::new(s.clone(), &w, &o).map_err(|e| e.to_string())?;
                if c.homology_class().is_zero() {
                    ensure!(!c.is_reduced(), "genus {g}: {w:?} {o:?} is null-homologous but reduced");
                    checked[g] += 1;
                }
            }
        }
    }
    Ok(format!("{} on the torus and {} on genus 2 null-homologous, none reduced", checked[1], checked[2]))
}

fn dimension_bound() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let mut accepted = 0;
    for g in [2usize, 3, 4] {
        let gi = g as i64;
        for t in 0..10_000 {
            let levels = match t % 3 {
                0 => random_wired(&mut rng, 2 * g),
                1 => random_simplex(&mut rng, g),
                _ => {
                    let mut l = random_simplex(&mut rng, g);
                    let i = rng.gen_range(0..l.len());
                    let j = rng.gen_range(0..l[i].len());
                    l[i][j].genus += 1;
                    l
                }
            };
            let cycle = CobordismCycle::new(levels.clone()).map_err(|e| format!("generator: {e}"))?;
            let got = cycle.validate(gi);
            match (oracle_validate(&levels, gi), &got) {
                (Verdict::Simplex(k), Ok(r)) => {
                    ensure!(r.k == k && k as i64 <= 2 * gi - 3, "genus {g}: accepted k={} bound {}", r.k, 2 * g - 3);
                    accepted += 1;
                }
                (Verdict::Null, Err(CobordismError::NullPiece { .. }))
                | (Verdict::Annuli, Err(CobordismError::AllAnnuliLevel { .. }))
                | (Verdict::Disconnected, Err(CobordismError::DisconnectedGluing))
                | (Verdict::Euler, Err(CobordismError::EulerMismatch { .. })) => {}
                (v, r) => return Err(format!("genus {g}: oracle {v:?}, library {r:?}")),
            }
        }
        for _ in 0..1000 {
            let levels = overfull(&mut rng, g);
            ensure!(levels.len() == 2 * g - 1, "overfull generator");
            let r = CobordismCycle::new(levels).map_err(|e| e.to_string())?.validate(gi);
            ensure!(matches!(r, Err(CobordismError::EulerMismatch { .. })), "genus {g}: {}-level candidate gave {r:?}", 2 * g - 1);
        }
    }
    Ok(format!("30000 cycles, {accepted} accepted, 3000 overfull rejected"))
}

fn pants_extension() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    for g in [2usize, 3] {
        let gi = g as i64;
        for _ in 0..1000 {
            let levels = random_simplex(&mut rng, g);
            let input = CobordismCycle::new(levels.clone()).map_err(|e| e.to_string())?;
            let top = input.extend_to_top(gi).map_err(|e| format!("extend: {e}"))?;
            let tl: Levels = top.levels().to_vec();
            ensure!(oracle_validate(&tl, gi) == Verdict::Simplex(2 * g - 3), "genus {g}: extension is not a top simplex");
            ensure!(tl.iter().all(|l| level_chi(l) == -1), "genus {g}: a level has chi != -1");
            let keep: BTreeSet<BTreeSet<String>> = (0..input.levels().len()).map(|i| input.circle_set(i)).collect();
            let mut cur = top;
            while let Some(i) = (0..cur.levels().len()).find(|&i| !keep.contains(&cur.circle_set(i))) {
                cur = cur.face(i).map_err(|e| format!("face: {e}"))?;
            }
            ensure!(normalized(&cur.levels().to_vec()) == normalized(&levels), "genus {g}: faces do not recover the input");
        }
    }
    Ok("2000 simplices extended and recovered".into())
}

fn set_partitions(items: &[String], max_blocks: usize) -> Vec<Vec<Vec<String>>> {
    let mut out = Vec::new();
    fn rec(items: &[String], i: usize, max: usize, cur: &mut Vec<Vec<String>>, out: &mut Vec<Vec<Vec<String>>>) {
        if i == items.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(items[i].clone());
            rec(items, i + 1, max, cur, out);
            cur[b].pop();
        }
        if cur.len() < max {
            cur.push(vec![items[i].clone()]);
            rec(items, i + 1, max, cur, out);
            cur.pop();
        }
    }
    rec(items, 0, max_blocks, &mut Vec::new(), &mut out);
    out
}

/// Null-free sides: pieces from a partition of the shared circles, each
/// with genus 0 or 1 and one or two outer circles.
fn sides(shared: &[String], tag: &str, first: bool) -> Vec<Vec<CobordismPiece>> {
    let mut out = Vec::new();
    for part in set_partitions(shared, 3) {
        let m = part.len();
        for mask in 0..(1u32 << (2 * m)) {
            let side: Vec<CobordismPiece> = part
                .iter()
                .enumerate()
                .map(|(j, block)| {
                    let genus = (mask >> (2 * j) & 1) as i64;
                    let outer: Vec<String> = (0..1 + (mask >> (2 * j + 1) & 1)).map(|t| format!("{tag}{j}_{t}")).collect();
                    if first {
                        piece(genus, &outer, block)
                    } else {
                        piece(genus, block, &outer)
                    }
                })
                .collect();
            out.push(side);
        }
    }
    out
}

fn composition() -> Outcome {
    let mut pairs = 0usize;
    for m in 1..=4 {
        let shared: Vec<String> = (0..m).map(|i| format!("s{i}")).collect();
        let set: BTreeSet<String> = shared.iter().cloned().collect();
        let firsts = sides(&shared, "a", true);
        let seconds = sides(&shared, "b", false);
        for f in &firsts {
            for s in &seconds {
                let got = compose(f, s, &set).map_err(|e| format!("{e}"))?;
                ensure!(got.iter().all(|p| !p.is_null()), "null composite from {f:?} and {s:?}");
                let mut want = oracle_compose(f, s);
                let mut got = got;
                want.sort();
                got.sort();
                ensure!(got == want, "composite of {f:?} and {s:?} differs from oracle");
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} composable pairs"))
}

fn random_configs(rng: &mut StdRng, n: usize) -> Result<Vec<EmbeddedConfiguration>, String> {
    let pools: Vec<(Arc<CombinatorialSurface>, Vec<Vec<usize>>)> =
        [1, 2].iter().map(|&g| { let s = surface(g); let w = weight_vectors(&s, 8); (s, w) }).collect();
    let mut out = Vec::new();
    while out.len() < n {
        let (s, pool) = &pools[rng.gen_range(0..2)];
        let w = &pool[rng.gen_range(0..pool.len())];
        let c0 = OrientedMulticurve::positive(s.clone(), w).map_err(|e| e.to_string())?;
        let nc = c0.num_components();
        let o: Vec<i64> = (0..nc).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        let c = OrientedMulticurve::new(s.clone(), w, &o).map_err(|e| e.to_string())?;
        if c.homology_class().is_zero() {
            continue;
        }
        // most assignments of components to cycles break the wiring; try a few
        let levels = rng.gen_range(1..=nc.min(3));
        for _ in 0..20 {
            let cyc: Vec<usize> = (0..nc).map(|_| rng.gen_range(0..levels)).collect();
            if (0..levels).any(|i| !cyc.contains(&i)) {
                continue;
            }
            let raw: Vec<i64> = (0..levels).map(|_| rng.gen_range(1..=5)).collect();
            let tot: i64 = raw.iter().sum();
            let weights: Vec<Rational> = raw.iter().map(|&r| Rational::new(r, tot)).collect();
            if let Ok(cfg) = EmbeddedConfiguration::new(c.clone(), cyc, weights) {
                out.push(cfg);
                break;
            }
        }
    }
    Ok(out)
}

fn dual_graph_reduction() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let configs = random_configs(&mut rng, 1000)?;
    let mut events = 0;
    let mut multi = 0;
    for (t, cfg) in configs.iter().enumerate() {
        if cfg.num_cycles() > 1 {
            multi += 1;
        }
        let x = cfg.cycle_class(0);
        let e = cfg.curves().num_components();
        let (out, log) = match cfg.reduce() {
            Ok(r) => r,
            Err(ReductionError::VanishedConfiguration) => return Err(format!("config {t} vanished with class {x}")),
            Err(err) => return Err(format!("config {t}: {err}")),
        };
        ensure!(log.events.len() <= e, "config {t}: {} events for {e} circles", log.events.len());
        events += log.events.len();
        let levels: Levels = out.abstract_cycle().map_err(|e| e.to_string())?.levels().to_vec();
        ensure!(sinks_and_sources(&levels) == (0, 0), "config {t}: sinks or sources remain");
        for i in 0..out.num_cycles() {
            ensure!(out.cycle_class(i) == x, "config {t}: cycle {i} changed class");
            ensure!(out.cycle(i).is_reduced(), "config {t}: cycle {i} is not reduced");
        }
        for ev in log.events.iter().filter(|ev| ev.phase == Phase::Source) {
            ensure!(ev.sinks_after == 0, "config {t}: source elimination created a sink");
        }
        let (again, log2) = out.reduce().map_err(|e| e.to_string())?;
        ensure!(again == out && log2.events.is_empty(), "config {t}: reduction is not idempotent");
    }
    Ok(format!("1000 configurations ({multi} with several cycles), {events} events"))
}

fn surgery_corpus() -> Result<Vec<SurgeryState>, String> {
    let s = surface(2);
    let mut states = Vec::new();
    for (x, bound) in [(vec![0, 1, 1, 0], 14), (vec![1, 0, 1, 0], 18)] {
        let cycles = enumerate_cycles(&s, &HomologyClass(x), bound).map_err(|e| e.to_string())?;
        let mut configs: Vec<EmbeddedConfiguration> =
            cycles.iter().map(|c| EmbeddedConfiguration::vertex(c.clone()).unwrap()).collect();
        for i in 0..cycles.len() {
            for j in i + 1..cycles.len() {
                if are_adjacent(&cycles[i], &cycles[j]).map_err(|e| e.to_string())?.is_adjacent() {
                    let e = realize(&[&cycles[i], &cycles[j]]).map_err(|e| e.to_string())?.expect("adjacent pair");
                    let w = vec![Rational::new(1, 3), Rational::new(2, 3)];
                    configs.push(EmbeddedConfiguration::new(e.curves().clone(), e.cycle_of_component().to_vec(), w.clone()).unwrap());
                    configs.push(e);
                }
            }
        }
        for cfg in &configs {
            for b in cycles.iter().filter(|c| c.num_components() == 1) {
                let st = SurgeryState::new(cfg.clone(), b.clone()).map_err(|e| e.to_string())?;
                if [2, 4, 6].contains(&st.num_crossings()) {
                    states.push(st);
                }
            }
        }
    }
    Ok(states)
}

fn surgery_retraction() -> Outcome {
    let states = surgery_corpus()?;
    ensure!(states.len() >= 20, "only {} states", states.len());
    let mut by_n = [0usize; 4];
    for (t, st) in states.iter().enumerate() {
        let n = st.num_crossings();
        by_n[n / 2] += 1;
        let x = st.base().homology_class();
        let path = st.retract_to_star().map_err(|e| format!("state {t} (n={n}): {e}"))?;
        ensure!(path.steps.len() <= n / 2, "state {t}: {} steps for {n} crossings", path.steps.len());
        let mut last = n;
        for step in &path.steps {
            ensure!(step.crossings_after < last, "state {t}: crossings did not drop");
            last = step.crossings_after;
            for seg in &step.segments {
                let cfg = EmbeddedConfiguration::from_data(st.config().surface().clone(), &seg.config)
                    .map_err(|e| format!("state {t}: {e}"))?;
                for i in 0..cfg.num_cycles() {
                    let c = cfg.cycle(i);
                    ensure!(c.is_reduced() && c.homology_class() == x, "state {t}: intermediate cycle {i} is not reduced in class {x}");
                }
                cfg.validate().map_err(|e| format!("state {t}: intermediate simplex: {e}"))?;
            }
        }
        ensure!(last == 0, "state {t}: ended with {last} crossings");
        ensure!(path.star.kappa_values == 2, "state {t}: kappa takes {} values", path.star.kappa_values);
        let star = EmbeddedConfiguration::from_data(st.config().surface().clone(), &path.star.config).map_err(|e| e.to_string())?;
        star.validate().map_err(|e| format!("state {t}: star: {e}"))?;
        let bkey = st.base().canonical_key();
        ensure!(
            (0..star.num_cycles()).any(|i| star.cycle(i).canonical_key() == bkey),
            "state {t}: base is not a vertex of the final simplex"
        );
    }
    Ok(format!("{} states (n=2: {}, n=4: {}, n=6: {})", states.len(), by_n[1], by_n[2], by_n[3]))
}

fn genus2_subcomplex() -> Outcome {
    let s = surface(2);
    let snap = build_subcomplex(&s, &HomologyClass(vec![1, 0, 0, 0]), 12).map_err(|e| e.to_string())?;
    ensure!(snap.stats.edges >= 1, "no edge");
    ensure!(snap.simplices.iter().all(|f| f.len() <= 2), "a simplex with {} vertices", snap.simplices.iter().map(|f| f.len()).max().unwrap());
    ensure!(snap.stats.dimension == 1, "dimension {}", snap.stats.dimension);
    for f in &snap.simplices {
        let c0 = from_key(s.clone(), &snap.vertices[f[0]]).map_err(|e| e.to_string())?;
        let c1 = from_key(s.clone(), &snap.vertices[f[1]]).map_err(|e| e.to_string())?;
        match are_adjacent(&c0, &c1).map_err(|e| e.to_string())? {
            Adjacency::Adjacent { witness } => {
                let l: Levels = witness.levels().to_vec();
                ensure!(oracle_validate(&l, 2) == Verdict::Simplex(1), "witness is not an edge");
                ensure!(l.iter().all(|lv| level_chi(lv) == -1 && lv.iter().any(|p| p.in_circles.len() + p.out_circles.len() == 3 && p.genus == 0)), "witness is not two pants");
            }
            other => return Err(format!("edge {f:?} not confirmed: {other:?}")),
        }
    }
    Ok(format!("{} vertices, {} edges, dimension 1", snap.stats.vertices, snap.stats.edges))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("torus uniqueness", torus_uniqueness, Duration::from_secs(60)),
        ("null-homologous cycles are not reduced", null_not_reduced, Duration::from_secs(300)),
        ("dimension bound", dimension_bound, Duration::from_secs(60)),
        ("pants extension", pants_extension, Duration::from_secs(60)),
        ("composition of null-free cobordisms", composition, Duration::from_secs(60)),
        ("dual-graph reduction", dual_graph_reduction, Duration::from_secs(60)),
        ("surgery retraction", surgery_retraction, Duration::from_secs(120)),
        ("genus-2 subcomplex", genus2_subcomplex, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let el = t.elapsed();
        let r = match r {
            Ok(msg) if el > *limit => Err(format!("{msg}; took {el:.1?}, limit {limit:?}")),
            other => other,
        };
        match r {
            Ok(msg) => println!("PASS {}. {name}: {msg} [{el:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}. {name}: {msg} [{el:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
