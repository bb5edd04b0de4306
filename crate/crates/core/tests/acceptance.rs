//! The eight acceptance criteria, each printed as one PASS/FAIL line.
//!
//! Lines go straight to standard error so they show without `--nocapture`.

use std::io::Write;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rbt::contraction::{contract, find_matching, ContractedDigraph, Direction, PerfectMatching};
use rbt::cycle::{Cycle, CycleFactor};
use rbt::engine::{solve_with, Outcome, SolveOptions};
use rbt::factor::{find_cycle_factor, hm_normalize, HmOutcome};
use rbt::graph::Digraph;
use rbt::merge::merge_to_two_factor;
use rbt::oracle::{
    brute_force_two_factor, count_labeled, enumerate_instances, hamiltonian_subset_dp, run_exhaustive, verify_two_factor,
    ExhaustiveOptions,
};
use rbt::rewiring::{switch, switch_contracted, AntiCycle};
use rbt::tournament::{
    is_f_isomorphic, is_f_witness, make_f4k, random_regular, relabel_within_sides, shuffle_sides, FMode,
    RegularBipartiteTournament,
};

type Verdict = Result<String, String>;
type Criterion = Box<dyn FnOnce(&mut Tally) -> Verdict>;

fn is_f(d: &RegularBipartiteTournament) -> bool {
    is_f_isomorphic(d.digraph(), d.digraph().vertices(), FMode::F)
}

fn set_of(vs: &[usize]) -> u64 {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

/// Cycle through exactly `vs` in the digraph, checked arc by arc.
fn is_cycle(g: &Digraph, vs: &[usize]) -> bool {
    vs.len() >= 2
        && set_of(vs).count_ones() as usize == vs.len()
        && (0..vs.len()).all(|i| g.has_arc(vs[i], vs[(i + 1) % vs.len()]))
}

#[derive(Default)]
struct Tally {
    solves: usize,
    steps: usize,
    fallbacks: usize,
}

impl Tally {
    fn solve(&mut self, d: &RegularBipartiteTournament, p: usize) -> rbt::Result<Outcome> {
        let r = solve_with(d, p, &SolveOptions::default())?;
        self.solves += 1;
        self.steps += r.stats.steps;
        self.fallbacks += r.stats.fallbacks;
        Ok(r.outcome)
    }
}

fn exhaustive_k2(t: &mut Tally) -> Verdict {
    let by_recursion = count_labeled(2).map_err(|e| e.to_string())?;
    let instances: Vec<_> = enumerate_instances(2, false).map_err(|e| e.to_string())?.collect();
    if instances.len() as u64 != by_recursion {
        return Err(format!("enumeration {} vs recursion {by_recursion}", instances.len()));
    }
    let (mut solved, mut excluded) = (0, 0);
    for (i, d) in instances.iter().enumerate() {
        match t.solve(d, 2) {
            Ok(Outcome::Solved(c)) => {
                verify_two_factor(d, &c).map_err(|v| format!("idx={i}: {v}"))?;
                if is_f(d) {
                    return Err(format!("idx={i}: F_8 solved"));
                }
                solved += 1;
            }
            Ok(Outcome::Excluded) if is_f(d) => excluded += 1,
            Ok(Outcome::Excluded) => return Err(format!("idx={i}: non-F excluded")),
            Err(e) => return Err(format!("idx={i}: {e}")),
        }
    }
    Ok(format!("{} labeled instances, {solved} solved, {excluded} F_8 excluded", instances.len()))
}

fn exhaustive_k3() -> Verdict {
    let by_recursion = count_labeled(3).map_err(|e| e.to_string())?;
    let instances: Vec<_> = enumerate_instances(3, false).map_err(|e| e.to_string())?.collect();
    if instances.len() as u64 != by_recursion {
        return Err(format!("enumeration {} vs recursion {by_recursion}", instances.len()));
    }
    let f_labelings = instances.iter().filter(|d| is_f(d)).count();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut opts = ExhaustiveOptions::new(vec![2, 3]);
    opts.workers = 4;
    opts.cursor = Some(dir.path().join("k3.cursor"));
    let r = run_exhaustive(3, &opts, &mut |_| {}).map_err(|e| e.to_string())?;
    if r.falsified != 0 {
        return Err(format!("{} falsifications: {}", r.falsified, r.falsifications.join("; ")));
    }
    if r.excluded != 2 * f_labelings || r.solved != 2 * (instances.len() - f_labelings) {
        return Err(format!("counts off: {}", r.summary()));
    }
    if brute_force_two_factor(&make_f4k(3).unwrap(), 3).map_err(|e| e.to_string())?.is_some() {
        return Err("F_12 has a (6,6)-factor".into());
    }
    Ok(format!(
        "{} labeled instances x p in {{2,3}}: {} solved, {} excluded ({} F_12 labelings), F_12 has no (6,6)-factor, {} ms",
        instances.len(),
        r.solved,
        r.excluded,
        f_labelings,
        r.elapsed_ms
    ))
}

fn random_k4_to_8(t: &mut Tally) -> Verdict {
    let mut certs = 0;
    let mut witnessed = 0;
    for k in 4..=8 {
        for seed in 0..500u64 {
            let d = random_regular(k, 1000 * k as u64 + seed);
            if is_f(&d) {
                continue;
            }
            for p in 2..=k {
                let cert = match t.solve(&d, p) {
                    Ok(Outcome::Solved(c)) => c,
                    Ok(Outcome::Excluded) => return Err(format!("k={k} seed={seed}: non-F excluded")),
                    Err(e) => return Err(format!("k={k} seed={seed} p={p}: {e}")),
                };
                verify_two_factor(&d, &cert).map_err(|v| format!("k={k} seed={seed} p={p}: {v}"))?;
                if p % 2 == 0 && p >= 4 {
                    let w = cert.witness.ok_or_else(|| format!("k={k} seed={seed} p={p}: no witness"))?;
                    if !is_f_witness(d.digraph(), set_of(&cert.cycle_2p), w) {
                        return Err(format!("k={k} seed={seed} p={p}: witness fails"));
                    }
                    witnessed += 1;
                }
                certs += 1;
            }
        }
    }
    Ok(format!("{certs} certificates verified, {witnessed} F-avoidance witnesses checked"))
}

fn oracle_cross_check(t: &mut Tally) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut pairs, mut exists, mut f_pairs) = (0, 0, 0);
    let mut seed = 0u64;
    while pairs < 1000 {
        let k = 2 + (seed % 3) as usize;
        let d = if seed % 10 == 9 {
            shuffle_sides(&make_f4k(k).unwrap(), &mut rng)
        } else {
            shuffle_sides(&random_regular(k, seed), &mut rng)
        };
        seed += 1;
        let f = is_f(&d);
        for p in 2..=k {
            pairs += 1;
            let oracle = brute_force_two_factor(&d, p).map_err(|e| e.to_string())?;
            exists += oracle.is_some() as usize;
            let tag = format!("k={k} p={p}\n{}", d.to_text());
            match t.solve(&d, p) {
                Ok(Outcome::Solved(c)) => {
                    verify_two_factor(&d, &c).map_err(|v| format!("{tag}: {v}"))?;
                    if oracle.is_none() {
                        return Err(format!("solver found a factor the oracle denies: {tag}"));
                    }
                }
                Ok(Outcome::Excluded) if f => f_pairs += 1,
                Ok(Outcome::Excluded) => return Err(format!("non-F excluded: {tag}")),
                Err(e) => return Err(format!("{tag}: {e}")),
            }
            if !f && oracle.is_none() {
                return Err(format!("oracle finds no factor on a non-F instance: {tag}"));
            }
        }
    }
    Ok(format!("{pairs} pairs, oracle exists on {exists}, {f_pairs} F pairs excluded, 0 disagreements"))
}

/// Some perfect matching of `d`, randomised by relabelling before searching.
fn random_matching(d: &RegularBipartiteTournament, dir: Direction, rng: &mut ChaCha8Rng) -> PerfectMatching {
    let n = 2 * d.k();
    let mut ps: Vec<usize> = (0..n).collect();
    let mut pt: Vec<usize> = (0..n).collect();
    ps.shuffle(rng);
    pt.shuffle(rng);
    let r = relabel_within_sides(d, &ps, &pt);
    let m = find_matching(&r, dir);
    // relabelled id `ps[i]` (S) or `n + pt[j]` (T) is original `i` or `n + j`
    let back = |v: usize| {
        if v < n {
            ps.iter().position(|&x| x == v).unwrap()
        } else {
            n + pt.iter().position(|&x| x == v - n).unwrap()
        }
    };
    let pairs: Vec<(usize, usize)> = m.pairs().into_iter().map(|(u, v)| (back(u), back(v))).collect();
    PerfectMatching::from_pairs(d, dir, &pairs).expect("relabelled matching maps back")
}

/// Random walk in the complement of `D^M` until it closes an anti-cycle.
fn random_anti_cycle(cd: &ContractedDigraph, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
    let g = cd.digraph();
    let verts: Vec<usize> = (0..64).filter(|&v| cd.vertices() >> v & 1 == 1).collect();
    let mut walk = vec![*verts.choose(rng)?];
    loop {
        let u = *walk.last().unwrap();
        let outs: Vec<usize> = verts.iter().copied().filter(|&v| v != u && !g.has_arc(u, v)).collect();
        let v = *outs.choose(rng)?;
        if let Some(i) = walk.iter().position(|&w| w == v) {
            return Some(walk[i..].to_vec());
        }
        walk.push(v);
    }
}

fn switch_suite() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut pairs, mut moved) = (0, 0);
    let mut seed = 0u64;
    while pairs < 10_000 {
        let k = 2 + (seed % 5) as usize;
        let d = random_regular(k, seed);
        seed += 1;
        let dir = if seed.is_multiple_of(2) { Direction::Up } else { Direction::Down };
        let m = random_matching(&d, dir, &mut rng);
        let cd = contract(&d, &m).map_err(|e| e.to_string())?;
        let Some(h) = random_anti_cycle(&cd, &mut rng) else { continue };
        let ac = AntiCycle::new(&cd, h.clone()).map_err(|e| format!("{h:?}: {e}"))?;
        let m2 = switch(&cd, &ac);
        m2.validate(&d).map_err(|e| format!("switched matching invalid: {e}"))?;
        // contract from scratch, independent of the switch bookkeeping
        let fresh = contract(&d, &m2).map_err(|e| e.to_string())?;
        let (g, g2) = (cd.digraph(), fresh.digraph());
        let t = h.len();
        for i in 0..t {
            let (u, prev) = (h[i], h[(i + t - 1) % t]);
            if g2.out_set(u) != g.out_set(prev) {
                return Err(format!("N+ of {u} after switch is not N+ of {prev} before"));
            }
            moved += 1;
        }
        for v in (0..64).filter(|&v| cd.vertices() >> v & 1 == 1 && !h.contains(&v)) {
            if g2.out_set(v) != g.out_set(v) || m2.partner(v) != m.partner(v) {
                return Err(format!("non-participant {v} changed"));
            }
        }
        if switch_contracted(&cd, &ac).digraph() != g2 {
            return Err("incremental contraction differs from recontraction".into());
        }
        pairs += 1;
    }
    Ok(format!("{pairs} (matching, anti-cycle) pairs, {moved} out-neighbourhoods moved exactly"))
}

/// Random `len`-cycle by randomised depth-first search.
fn random_cycle(g: &Digraph, len: usize, rng: &mut ChaCha8Rng, budget: &mut usize) -> Option<Vec<usize>> {
    fn go(g: &Digraph, len: usize, path: &mut Vec<usize>, rng: &mut ChaCha8Rng, budget: &mut usize) -> bool {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let last = *path.last().unwrap();
        if path.len() == len {
            return g.has_arc(last, path[0]);
        }
        let mut next: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.has_arc(last, v) && !path.contains(&v)).collect();
        next.shuffle(rng);
        for v in next {
            path.push(v);
            if go(g, len, path, rng, budget) {
                return true;
            }
            path.pop();
        }
        false
    }
    let mut path = vec![rng.gen_range(0..g.vertex_count())];
    go(g, len, &mut path, rng, budget).then_some(path)
}

fn merge_suite() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut done, mut multi, mut witnessed) = (0, 0, 0);
    let mut seed = 0u64;
    while done < 1000 {
        let k = 3 + (seed % 4) as usize;
        let d = shuffle_sides(&random_regular(k, seed), &mut rng);
        seed += 1;
        let g = d.digraph();
        let p = rng.gen_range(2..=k);
        let mut budget = 20_000;
        let Some(c) = random_cycle(g, 2 * p, &mut rng, &mut budget) else { continue };
        let even = p % 2 == 0 && p >= 4;
        if even && is_f_isomorphic(g, set_of(&c), FMode::F) {
            continue;
        }
        let Some(rest) = find_cycle_factor(g, g.vertices() & !set_of(&c)) else { continue };
        let c = Cycle::new(c);
        let mut cycles = vec![c.clone()];
        cycles.extend(rest.cycles);
        multi += (cycles.len() > 2) as usize;
        let out = merge_to_two_factor(&d, &CycleFactor::new(cycles), &c).map_err(|e| format!("k={k} p={p}: {e}\n{}", d.to_text()))?;
        let (a, b) = (out.first.vertices(), out.second.vertices());
        if a.len() != 2 * p || b.len() != 4 * k - 2 * p || set_of(a) | set_of(b) != g.vertices() || set_of(a) & set_of(b) != 0 {
            return Err(format!("k={k} p={p}: wrong lengths or not a partition"));
        }
        if !is_cycle(g, a) || !is_cycle(g, b) {
            return Err(format!("k={k} p={p}: output is not two cycles"));
        }
        if even {
            let w = out.witness.ok_or_else(|| format!("k={k} p={p}: witness missing"))?;
            if !is_f_witness(g, set_of(a), w) || is_f_isomorphic(g, set_of(a), FMode::F) {
                return Err(format!("k={k} p={p}: F-avoidance fails"));
            }
            witnessed += 1;
        }
        done += 1;
    }
    Ok(format!("{done} factored instances merged ({multi} with 3+ cycles), {witnessed} witnesses checked"))
}

/// No arc from a later cycle back to an earlier one.
fn dominance_ordered(g: &Digraph, cycles: &[Cycle]) -> bool {
    (0..cycles.len()).all(|i| {
        (i + 1..cycles.len()).all(|j| {
            cycles[j].vertices().iter().all(|&u| cycles[i].vertices().iter().all(|&v| !g.has_arc(u, v)))
        })
    })
}

fn hm_suite() -> Verdict {
    let (mut ham, mut ordered) = (0, 0);
    for k in 2..=3 {
        for d in enumerate_instances(k, false).map_err(|e| e.to_string())? {
            for dir in [Direction::Up, Direction::Down] {
                let cd = contract(&d, &find_matching(&d, dir)).map_err(|e| e.to_string())?;
                let (g, ground) = (cd.digraph(), cd.vertices());
                let Some(f) = find_cycle_factor(g, ground) else { continue };
                let dp = hamiltonian_subset_dp(g, ground);
                match hm_normalize(g, ground, &f).map_err(|e| e.to_string())? {
                    HmOutcome::Hamiltonian(h) => {
                        if !g.is_strong_on(ground) || !is_cycle(g, h.vertices()) || set_of(h.vertices()) != ground || dp.is_none() {
                            return Err(format!("bad hamiltonian outcome\n{}", d.to_text()));
                        }
                        ham += 1;
                    }
                    HmOutcome::Ordered(o) => {
                        if g.is_strong_on(ground) || dp.is_some() || !dominance_ordered(g, &o.cycles) {
                            return Err(format!("bad ordered outcome\n{}", d.to_text()));
                        }
                        if o.cycles.iter().any(|c| !is_cycle(g, c.vertices())) || o.vertex_set() != ground {
                            return Err(format!("ordered outcome is not a factor\n{}", d.to_text()));
                        }
                        ordered += 1;
                    }
                }
            }
        }
    }
    // non-strong fixture: two digons with arcs one way only
    let mut g = Digraph::new(4);
    for (u, v) in [(0, 1), (1, 0), (2, 3), (3, 2), (0, 2), (1, 3)] {
        g.add_arc(u, v);
    }
    let f = find_cycle_factor(&g, 0b1111).ok_or("fixture has no factor")?;
    match hm_normalize(&g, 0b1111, &f).map_err(|e| e.to_string())? {
        HmOutcome::Ordered(o) if dominance_ordered(&g, &o.cycles) => ordered += 1,
        _ => return Err("non-strong fixture not ordered".into()),
    }
    Ok(format!("{ham} hamiltonian outcomes agree with the subset DP, {ordered} dominance orders verified"))
}

/// Cycles with smallest vertex first, each once, of length 2..=max.
fn all_cycles(g: &Digraph, ground: u64, max: usize) -> Vec<Vec<usize>> {
    fn go(g: &Digraph, ground: u64, max: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let (s, last) = (path[0], path[path.len() - 1]);
        if path.len() >= 2 && g.has_arc(last, s) {
            out.push(path.clone());
        }
        if path.len() == max {
            return;
        }
        for v in s + 1..g.vertex_count() {
            if ground >> v & 1 == 1 && !path.contains(&v) && g.has_arc(last, v) {
                path.push(v);
                go(g, ground, max, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in (0..g.vertex_count()).filter(|&s| ground >> s & 1 == 1) {
        go(g, ground, max, &mut vec![s], &mut out);
    }
    out
}

fn contraction_bijection() -> Verdict {
    let mut lifted = 0usize;
    for k in 1..=3 {
        for d in enumerate_instances(k, false).map_err(|e| e.to_string())? {
            let host = d.digraph();
            for dir in [Direction::Up, Direction::Down] {
                let m = find_matching(&d, dir);
                let cd = contract(&d, &m).map_err(|e| e.to_string())?;
                for c in all_cycles(cd.digraph(), cd.vertices(), 6) {
                    let cyc = Cycle::new(c.clone());
                    let up = cd.lift(&cyc).map_err(|e| format!("{c:?}: {e}"))?;
                    let hv = up.vertices();
                    if hv.len() != 2 * c.len() || !is_cycle(host, hv) {
                        return Err(format!("lift of {c:?} is not a host cycle of length {}", 2 * c.len()));
                    }
                    if (0..c.len()).any(|i| !hv.contains(&c[i]) || !hv.contains(&m.partner(c[i]))) {
                        return Err(format!("lift of {c:?} misses a matched pair"));
                    }
                    if cd.contract_cycle(&up) != Some(cyc) {
                        return Err(format!("{c:?} does not round-trip"));
                    }
                    lifted += 1;
                }
            }
        }
    }
    Ok(format!("{lifted} contracted cycles lifted and round-tripped"))
}

fn report(line: String) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance() {
    let mut tally = Tally::default();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("exhaustive k=2, p=2", Box::new(exhaustive_k2)),
        ("exhaustive k=3, p in {2,3}", Box::new(|_| exhaustive_k3())),
        ("random k=4..8, all p", Box::new(random_k4_to_8)),
        ("oracle cross-check, 4k <= 16", Box::new(oracle_cross_check)),
        ("switch suite", Box::new(|_| switch_suite())),
        ("merge suite", Box::new(|_| merge_suite())),
        ("HM normalisation suite", Box::new(|_| hm_suite())),
        ("contraction bijection, k <= 3", Box::new(|_| contraction_bijection())),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let verdict = run(&mut tally);
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(msg) => report(format!("criterion {} PASS  {name}: {msg} [{secs:.1}s]", i + 1)),
            Err(msg) => {
                report(format!("criterion {} FAIL  {name}: {msg} [{secs:.1}s]", i + 1));
                failed.push(i + 1);
            }
        }
    }
    report(format!(
        "solver runs={} extension steps={} fallback steps={}",
        tally.solves, tally.steps, tally.fallbacks
    ));
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
