//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so that every line is printed by
//! `cargo test`; the process fails if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use isoindex_core::degree::{fixed_point_index, inverse_index_relation, CATALOG};
use isoindex_core::homology::{boundary_matrices, homology, models};
use isoindex_core::realization::{build_skew_product, plan_from_shifted};
use isoindex_core::sequence::congruence_residue;
use isoindex_core::{
    anosov_index_sequence, check_dold, dold_coefficients, growth_exponent, lefschetz_number,
    nonzero_spectrum_match, roots_of_unity_eigencheck, sphere_degree, verify_roundtrip, CatalogMap,
    ChainMap, DoldDecomposition, IntMatrix, PeriodicSequence, SimplicialComplex, TriangulatedSphereMap,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// ---- independent number theory ----

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

fn mobius(n: u64) -> i64 {
    let mut m = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `I_n = sum_{k | n} k a_k`.
fn evaluate(coeffs: &BTreeMap<u64, i64>, n: u64) -> i64 {
    coeffs.iter().filter(|(&k, _)| n.is_multiple_of(k)).map(|(&k, &a)| k as i64 * a).sum()
}

/// `a_k = (1/k) sum_{d | k} mu(k/d) I_d`, or `None` when some `a_k` is not an integer.
fn invert(values: &[i64]) -> Option<BTreeMap<u64, i64>> {
    let mut out = BTreeMap::new();
    for k in 1..=values.len() as u64 {
        let mut sum: i128 = 0;
        let mut d = 1;
        while d * d <= k {
            if k % d == 0 {
                sum += mobius(k / d) as i128 * values[d as usize - 1] as i128;
                if d * d != k {
                    sum += mobius(d) as i128 * values[(k / d) as usize - 1] as i128;
                }
            }
            d += 1;
        }
        if sum % k as i128 != 0 {
            return None;
        }
        if sum != 0 {
            out.insert(k, (sum / k as i128) as i64);
        }
    }
    Some(out)
}

/// Random sparse decomposition: one to four distinct `k <= kmax`, `0 < |a_k| <= amax`.
fn random_decomposition(rng: &mut ChaCha8Rng, kmax: u64, amax: i64) -> BTreeMap<u64, i64> {
    let terms = rng.gen_range(1..=4);
    let mut out = BTreeMap::new();
    while out.len() < terms {
        let k = rng.gen_range(1..=kmax);
        let mut a = 0;
        while a == 0 {
            a = rng.gen_range(-amax..=amax);
        }
        out.insert(k, a);
    }
    out
}

fn corpus() -> Vec<BTreeMap<u64, i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    (0..1000).map(|_| random_decomposition(&mut rng, 12, 9)).collect()
}

fn lcm_of(keys: impl Iterator<Item = u64>) -> u64 {
    keys.fold(1, |l, k| l / gcd(l, k) * k)
}

// ---- criteria ----

fn dold_roundtrip() -> Outcome {
    let mut failures = Vec::new();
    let mut max_period = 0;
    for (i, coeffs) in corpus().iter().enumerate() {
        let period = lcm_of(coeffs.keys().copied());
        max_period = max_period.max(period);
        let values: Vec<i64> = (1..=period).map(|n| evaluate(coeffs, n)).collect();
        let dec = DoldDecomposition::from_integers(coeffs.iter().map(|(&k, &a)| (k, a))).unwrap();
        let seq = dec.to_sequence().unwrap();
        let back = dold_coefficients(&seq).integer_coefficients();
        let oracle = invert(&values);
        if seq.values() != values.as_slice() || back.as_ref() != Some(coeffs) || oracle.as_ref() != Some(coeffs) {
            failures.push(i);
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} of 1000 decompositions reconstruct (periods up to {max_period}); failures {failures:?}", 1000 - failures.len()),
    )
}

fn dold_congruences() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2000);
    let mut bad_congruence = 0;
    let mut perturbed = 0;
    let mut escaped = Vec::new();
    let (mut by_integrality, mut by_reconstruction) = (0, 0);
    for (i, coeffs) in corpus().iter().enumerate() {
        let period = lcm_of(coeffs.keys().copied());
        let seq = PeriodicSequence::new((1..=period).map(|n| evaluate(coeffs, n)).collect()).unwrap();
        for n in 1..=24u64 {
            let oracle: i128 = divisors(n).iter().map(|&d| mobius(n / d) as i128 * seq.at(d) as i128).sum();
            if congruence_residue(&seq, n) != 0 || oracle % n as i128 != 0 {
                bad_congruence += 1;
            }
        }
        // a single term of the sequence changes: write two periods out and
        // perturb one entry, at the start and at a random place
        let doubled = PeriodicSequence::new(seq.take(2 * period)).unwrap();
        for position in [0, rng.gen_range(0..2 * period as usize)] {
            let p = doubled.perturbed(position, 1);
            perturbed += 1;
            let c = check_dold(&p);
            if c.holds {
                escaped.push((i, position));
            } else if !c.decomposition.is_integral() || invert(p.values()).is_none() {
                by_integrality += 1;
            } else {
                by_reconstruction += 1;
            }
        }
    }
    outcome(
        bad_congruence == 0 && escaped.is_empty(),
        format!(
            "congruences hold for n <= 24 on all 1000 ({bad_congruence} violations); {perturbed} perturbations rejected: {by_integrality} by integrality, {by_reconstruction} by reconstruction, {} accepted {escaped:?}",
            escaped.len()
        ),
    )
}

fn linear_index_patterns() -> Outcome {
    let expected: [(&str, [i64; 4]); 3] = [
        ("contraction", [1, 1, 1, 1]),
        ("repeller", [-1, -1, -1, -1]),
        ("l-prime", [1, -1, 1, -1]),
    ];
    let mut bad = Vec::new();
    let mut runs = 0;
    for (id, want) in expected {
        let f = CatalogMap::by_id(id).unwrap();
        for epsilon in [1e-2, 5e-3] {
            for level in 2..=5 {
                for (n, &w) in (1..=4).zip(&want) {
                    runs += 1;
                    match fixed_point_index(&f, n, epsilon, level) {
                        Ok(r) if r.index == w && r.level_used <= 5 => {}
                        other => bad.push(format!("{id} n={n} eps={epsilon} level={level}: {other:?}")),
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{} of {runs} (map, n, epsilon, level) runs exact; {bad:?}", runs - bad.len()))
}

fn realization_roundtrip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3000);
    let mut failures = Vec::new();
    let mut families = 0;
    for i in 0..200 {
        let period = rng.gen_range(1..=12u64);
        let coeffs: BTreeMap<u64, i64> = divisors(period)
            .into_iter()
            .map(|k| (k, rng.gen_range(-5..=5)))
            .filter(|&(_, a)| a != 0)
            .collect();
        let seq = PeriodicSequence::new((1..=period).map(|n| evaluate(&coeffs, n)).collect()).unwrap();
        match verify_roundtrip(&seq) {
            Ok((plan, report)) => {
                families += plan.family_count();
                let common = lcm_of([seq.period() as u64, plan.period_lcm()].into_iter());
                let rows_ok = report.rows.len() as u64 == 2 * common
                    && report.rows.iter().all(|r| r.expected == evaluate(&coeffs, r.n) && r.realized == r.expected);
                if !(report.holds && rows_ok) {
                    failures.push(i);
                }
            }
            Err(e) => failures.push({
                eprintln!("sequence {i}: {e}");
                i
            }),
        }
    }
    outcome(
        failures.is_empty(),
        format!("{} of 200 sequences realized exactly over two common periods ({families} families); failures {failures:?}", 200 - failures.len()),
    )
}

fn anosov_unboundedness() -> Outcome {
    let seq = anosov_index_sequence(40);
    // t_n = tr(A^n) with t_1 = 3, t_2 = 7, t_{n+1} = 3 t_n - t_{n-1}
    let mut t: Vec<i128> = vec![3, 7];
    while t.len() < 40 {
        let n = t.len();
        t.push(3 * t[n - 1] - t[n - 2]);
    }
    let matches = seq.len() == 40 && seq.iter().zip(&t).all(|(s, &tn)| *s == BigInt::from(tn - 1));
    let first: Vec<String> = seq.iter().take(4).map(|v| v.to_string()).collect();
    let g = growth_exponent(&seq[..30]).unwrap();
    let target = ((3.0 + 5f64.sqrt()) / 2.0).ln();
    outcome(
        matches && first == ["2", "6", "17", "46"] && (g - target).abs() <= 0.01,
        format!(
            "n <= 40 exact: {matches} (starts {}); growth exponent {g:.4} vs {target:.4}",
            first.join(", ")
        ),
    )
}

fn closure(simplices: &[Vec<u32>]) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    for s in simplices {
        for mask in 1u32..(1 << s.len()) {
            out.insert(s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect());
        }
    }
    out
}

fn boundary_squares_vanish(c: &SimplicialComplex) -> bool {
    let d = boundary_matrices(c);
    d.windows(2).all(|w| w[0].mul(&w[1]).is_zero())
}

fn homology_engine() -> Outcome {
    let betti = |c: &SimplicialComplex| homology(c).iter().map(|g| g.betti).collect::<Vec<_>>();
    let torsion_free = |c: &SimplicialComplex| homology(c).iter().all(|g| g.torsion.is_empty());
    let tetra = models::tetrahedron_boundary();
    let torus = models::torus7();
    let sphere_ok = betti(&tetra)[..3] == [1, 0, 1] && torsion_free(&tetra);
    let torus_ok = betti(&torus)[..3] == [1, 2, 1] && torsion_free(&torus);
    let mut rng = ChaCha8Rng::seed_from_u64(4000);
    let mut lefschetz_ok = 0;
    let mut dd_ok = boundary_squares_vanish(&tetra) && boundary_squares_vanish(&torus);
    for _ in 0..10 {
        let v = rng.gen_range(4..=7u32);
        let mut simplices = Vec::new();
        for a in 0..v {
            for b in a + 1..v {
                if rng.gen_bool(0.2) {
                    simplices.push(vec![a, b]);
                }
                for c in b + 1..v {
                    if rng.gen_bool(0.25) {
                        simplices.push(vec![a, b, c]);
                    }
                    for d in c + 1..v {
                        if rng.gen_bool(0.05) {
                            simplices.push(vec![a, b, c, d]);
                        }
                    }
                }
            }
        }
        simplices.push(vec![0]);
        let all = closure(&simplices);
        let chi: i64 = all.iter().map(|s| if s.len() % 2 == 1 { 1 } else { -1 }).sum();
        let c = SimplicialComplex::new(all.iter().cloned()).unwrap();
        let id = ChainMap::identity_on_homology(&homology(&c));
        if lefschetz_number(&id, 1) == BigInt::from(chi) {
            lefschetz_ok += 1;
        }
        dd_ok &= boundary_squares_vanish(&c);
    }
    outcome(
        sphere_ok && torus_ok && lefschetz_ok == 10 && dd_ok,
        format!("sphere (Z,0,Z): {sphere_ok}; torus H_1 = Z^2: {torus_ok}; Λ(id) = χ on {lefschetz_ok}/10 random complexes; ∂∂ = 0: {dd_ok}"),
    )
}

/// Coefficients, constant term first.
type Poly = Vec<i64>;

fn poly_mul(a: &[i64], b: &[i64]) -> Poly {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact quotient by a monic divisor.
fn poly_div(a: &[i64], b: &[i64]) -> Poly {
    let mut rem = a.to_vec();
    let mut q = vec![0; a.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let c = rem[i + b.len() - 1];
        q[i] = c;
        for (j, y) in b.iter().enumerate() {
            rem[i + j] -= c * y;
        }
    }
    assert!(rem.iter().all(|&r| r == 0));
    q
}

/// `Phi_d` from `x^d - 1 = prod_{e | d} Phi_e`.
fn cyclotomic(d: u64) -> Poly {
    let mut p = vec![0; d as usize + 1];
    p[0] = -1;
    p[d as usize] = 1;
    for e in divisors(d).into_iter().filter(|&e| e < d) {
        p = poly_div(&p, &cyclotomic(e));
    }
    p
}

/// Companion matrix of a monic polynomial.
fn companion(p: &[i64]) -> IntMatrix {
    let n = p.len() - 1;
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if j == n - 1 { -p[i] } else if i == j + 1 { 1 } else { 0 }).collect())
        .collect();
    IntMatrix::from_rows(&rows).unwrap()
}

fn spectral_checks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5000);
    let mut cyclo_ok = 0;
    let mut cyclo_total = 0;
    let mut cases: Vec<Vec<u64>> = (1..=12).map(|d| vec![d]).collect();
    for _ in 0..30 {
        cases.push((0..rng.gen_range(2..=3)).map(|_| rng.gen_range(1..=12)).collect());
    }
    for ds in &cases {
        cyclo_total += 1;
        let p = ds.iter().fold(vec![1], |acc, &d| poly_mul(&acc, &cyclotomic(d)));
        let c = roots_of_unity_eigencheck(&companion(&p)).unwrap();
        if c.roots_of_unity && c.period == Some(lcm_of(ds.iter().copied())) {
            cyclo_ok += 1;
        }
    }
    let golden = roots_of_unity_eigencheck(&companion(&[-1, -1, 1])).unwrap();
    let golden_rejected = !golden.roots_of_unity && golden.period.is_none();
    let mut padding_ok = 0;
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let a: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let m = rng.gen_range(1..=4);
        let nil: Vec<Vec<i64>> = (0..m)
            .map(|i| (0..m).map(|j| if j > i { rng.gen_range(-3..=3) } else { 0 }).collect())
            .collect();
        let a = IntMatrix::from_rows(&a).unwrap();
        let padded = a.direct_sum(&IntMatrix::from_rows(&nil).unwrap());
        let bound = a.rows() + padded.rows();
        if nonzero_spectrum_match(&a, &padded, bound) == Ok(true) {
            padding_ok += 1;
        }
    }
    outcome(
        cyclo_ok == cyclo_total && golden_rejected && padding_ok == 50,
        format!("cyclotomic products {cyclo_ok}/{cyclo_total} with lcm period; x^2-x-1 rejected: {golden_rejected}; nilpotent padding {padding_ok}/50"),
    )
}

fn degree_robustness() -> Outcome {
    let mut sphere_ok = true;
    for level in 2..=5 {
        let id = sphere_degree(&TriangulatedSphereMap::from_fn(level, |z| z).unwrap()).map(|r| r.degree);
        let anti = sphere_degree(&TriangulatedSphereMap::from_fn(level, |z| [-z[0], -z[1], -z[2]]).unwrap()).map(|r| r.degree);
        sphere_ok &= id == Ok(1) && anti == Ok(-1);
    }
    let mut bad = Vec::new();
    let mut runs = 0;
    for id in CATALOG.iter().filter(|id| **id != "anosov-remark6") {
        let f = CatalogMap::by_id(id).unwrap();
        for n in 1..=4 {
            runs += 1;
            let coarse = fixed_point_index(&f, n, 1e-2, 3);
            let fine = fixed_point_index(&f, n, 1e-2, 4);
            match (&coarse, &fine) {
                (Ok(a), Ok(b)) if a.index == b.index && a.epsilon_check && b.epsilon_check => {}
                _ => bad.push(format!("{id} n={n}: {coarse:?} / {fine:?}")),
            }
        }
    }
    outcome(
        sphere_ok && bad.is_empty(),
        format!("identity/antipode at levels 2..5: {sphere_ok}; epsilon and level independence {}/{runs} catalog runs; {bad:?}", runs - bad.len()),
    )
}

fn inverse_antisymmetry() -> Outcome {
    let mut maps: Vec<CatalogMap> = CATALOG
        .iter()
        .map(|id| CatalogMap::by_id(id).unwrap())
        .filter(|f| f.invertible() && f.orientation_preserving())
        .collect();
    for fams in [vec![(2u64, -1i64)], vec![(3, 1)], vec![(2, -1), (3, 2)]] {
        let plan = plan_from_shifted(&fams.into_iter().collect()).unwrap();
        maps.push(CatalogMap::radial(Arc::new(build_skew_product(&plan).unwrap())));
    }
    let mut bad = Vec::new();
    let mut runs = 0;
    for f in &maps {
        for n in 1..=4 {
            runs += 1;
            match inverse_index_relation(f, n, 1e-2, 4) {
                Ok(r) if r.forward + r.inverse == 0 => {}
                other => bad.push(format!("{} n={n}: {other:?}", f.id())),
            }
        }
    }
    let ids: Vec<&str> = maps.iter().map(|f| f.id()).collect();
    outcome(
        bad.is_empty(),
        format!("i(f^-n) + i(f^n) = 0 in {}/{runs} runs over {ids:?}; {bad:?}", runs - bad.len()),
    )
}

/// Name, check and runtime limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, Option<f64>);

fn main() {
    let criteria: [Criterion; 9] = [
        ("dold-roundtrip", dold_roundtrip, Some(5.0)),
        ("dold-congruences", dold_congruences, Some(10.0)),
        ("index-patterns", linear_index_patterns, Some(60.0)),
        ("realization-roundtrip", realization_roundtrip, Some(5.0)),
        ("anosov-unbounded", anosov_unboundedness, None),
        ("homology-engine", homology_engine, Some(5.0)),
        ("spectral-checks", spectral_checks, None),
        ("degree-robustness", degree_robustness, None),
        ("inverse-antisymmetry", inverse_antisymmetry, None),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        let in_time = limit.is_none_or(|l| secs < l);
        let pass = o.pass && in_time;
        if !pass {
            failed += 1;
        }
        let budget = limit.map_or(String::new(), |l| format!(" (limit {l} s)"));
        println!(
            "{} {name}: {} [{secs:.2} s{budget}]",
            if pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
