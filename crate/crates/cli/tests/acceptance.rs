//! Acceptance suite: one PASS/FAIL line per criterion, then a nonzero exit
//! if any criterion failed. Runs without the libtest harness so the lines
//! are always printed.

use std::time::{Duration, Instant};

use jacinv_core::blocks::det_exponent;
use jacinv_core::generators::{
    random_bcw, random_quadratic_pair, random_section42, random_tame, LinearKind, TameParams,
};
use jacinv_core::{
    build_block, check_jacobi, default_cap, det_block, invert_block_scheme, invert_block_scheme_with,
    invert_oracle, invert_special_42, jacobian_det, parse_map, verify_inverse, BigInt, BigRational, Error,
    Exponent, InversionResult, InversionStatus, InvertOptions, ParseErrorKind, PolyMap, Polynomial,
    RationalMatrix,
};
use num_traits::{One, Pow, Zero};

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

/// Shared bookkeeping for the consistency guard.
#[derive(Default)]
struct Ledger {
    runs: usize,
    blocks_checked: usize,
    inconsistencies: Vec<String>,
    unchecked: Vec<String>,
    maps: Vec<PolyMap>,
}

impl Ledger {
    /// Block-scheme inversion with every `U V = I` check switched on.
    fn invert(&mut self, map: &PolyMap, cap: u32) -> Result<InversionResult, String> {
        let options = InvertOptions {
            cap: Some(cap),
            check_blocks: true,
            ..InvertOptions::default()
        };
        self.runs += 1;
        self.maps.push(map.clone());
        let r = invert_block_scheme_with(map, &options).map_err(|e| {
            if let Error::InternalInconsistency(d) = &e {
                self.inconsistencies.push(d.clone());
            }
            e.to_string()
        })?;
        if let InversionStatus::InternalInconsistency { detail } = &r.status {
            self.inconsistencies.push(detail.clone());
        }
        let used: Vec<u32> = r.residuum.keys().copied().collect();
        if r.checked_blocks != used {
            self.unchecked.push(format!("{map}: checked {:?}, used {used:?}", r.checked_blocks));
        }
        self.blocks_checked += r.checked_blocks.len();
        Ok(r)
    }
}

struct Outcome {
    failures: Vec<String>,
    summary: String,
}

impl Outcome {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            summary: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }
}

fn coeff(p: &Polynomial, a: u32, b: u32) -> BigRational {
    p.coeff(&Exponent::new(vec![a, b]))
}

/// Quadratic closed form for a plane pair `(f, g)` with Jacobian 1.
fn quadratic_closed_form(f: &Polynomial, g: &Polynomial) -> PolyMap {
    let a = |i, j| coeff(f, i, j);
    let b = |i, j| coeff(g, i, j);
    let u1 = Polynomial::var(2, 0);
    let u2 = Polynomial::var(2, 1);
    let ff = &u1 * &u1;
    let fg = &u1 * &u2;
    let gg = &u2 * &u2;
    let x = &(&(&u1.scale(&b(0, 1)) - &u2.scale(&a(0, 1)))
        + &ff.scale(&(half() * (b(0, 1) * b(1, 1) - q(2) * b(1, 0) * b(0, 2)))))
        + &(&fg.scale(&(q(2) * a(1, 0) * b(0, 2) - a(0, 1) * b(1, 1)))
            + &gg.scale(&(half() * (a(0, 1) * a(1, 1) - q(2) * a(1, 0) * a(0, 2)))));
    let y = &(&(&u2.scale(&a(1, 0)) - &u1.scale(&b(1, 0)))
        + &ff.scale(&(half() * (b(1, 0) * b(1, 1) - q(2) * b(0, 1) * b(2, 0)))))
        + &(&fg.scale(&(q(2) * a(0, 1) * b(2, 0) - a(1, 0) * b(1, 1)))
            + &gg.scale(&(half() * (a(1, 0) * a(1, 1) - q(2) * a(0, 1) * a(2, 0)))));
    PolyMap::new(vec![x, y]).unwrap()
}

fn criterion_1(ledger: &mut Ledger) -> Outcome {
    let mut out = Outcome::new();
    let mut nontrivial = 0;
    for seed in 0..200u64 {
        let k = random_quadratic_pair(seed);
        let (f, g) = (k.map.component(0), k.map.component(1));
        if k.map.degree() != Some(2) || k.inverse.degree() != Some(2) || k.jacobian_constant != q(1) {
            out.failures.push(format!("seed {seed}: generator left the quadratic unit family"));
            continue;
        }
        if !coeff(g, 2, 0).is_zero() || !coeff(g, 1, 1).is_zero() || !coeff(g, 0, 2).is_zero() {
            nontrivial += 1;
        }
        match ledger.invert(&k.map, default_cap(&k.map)) {
            Ok(r) => {
                let expected = quadratic_closed_form(f, g);
                out.check(r.certificate, || format!("seed {seed}: {:?}", r.status));
                out.check(r.inverse() == expected, || {
                    format!("seed {seed}: invert gave {} but the closed form is {expected}", r.inverse())
                });
            }
            Err(e) => out.failures.push(format!("seed {seed}: {e}")),
        }
    }
    out.summary = format!("200 quadratic pairs match the closed form exactly ({nontrivial} with quadratic g)");
    out
}

fn criterion_2(ledger: &mut Ledger) -> Outcome {
    let mut out = Outcome::new();
    for k in 2..=6u32 {
        for seed in 0..50u64 {
            let map = random_section42(k, seed);
            let closed = match invert_special_42(map.component(0), map.component(1)) {
                Ok(g) => g,
                Err(e) => {
                    out.failures.push(format!("k {k} seed {seed}: {e}"));
                    continue;
                }
            };
            match ledger.invert(&map, default_cap(&map)) {
                Ok(r) => {
                    out.check(r.inverse() == closed, || format!("k {k} seed {seed}: block scheme differs"));
                    out.check(verify_inverse(&map, &closed), || format!("k {k} seed {seed}: not inverse"));
                }
                Err(e) => out.failures.push(format!("k {k} seed {seed}: {e}")),
            }
        }
    }
    out.summary = "250 plane pairs (k = 2..6): closed form equals block scheme".into();
    out
}

/// Small deterministic generator for the matrix sweep.
struct Lcg(u64);

impl Lcg {
    fn next(&mut self, lo: i64, hi: i64) -> i64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        lo + ((self.0 >> 33) % (hi - lo + 1) as u64) as i64
    }
}

fn random_nonsingular(rng: &mut Lcg, n: usize) -> RationalMatrix {
    loop {
        let rows: Vec<Vec<BigRational>> = (0..n).map(|_| (0..n).map(|_| q(rng.next(-3, 3))).collect()).collect();
        let m = RationalMatrix::from_rows(rows).unwrap();
        if !m.determinant().unwrap().is_zero() {
            return m;
        }
    }
}

/// The 6x6 matrix A for three variables in the hand-derived layout: rows are
/// the derivative monomials x1, x2, x3 (squares) then x1x2, x1x3, x2x3;
/// columns are the unknowns for b200, b110, b101, b020, b002, b011.
/// `a[i][k]` is the coefficient of x_k in u_i.
fn matrix_a(l: &RationalMatrix) -> RationalMatrix {
    let a = |i: usize, k: usize| l.get(i, k).clone();
    let mut rows = Vec::new();
    for k in 0..3 {
        rows.push(vec![
            a(0, k) * a(0, k),
            a(0, k) * a(1, k),
            a(0, k) * a(2, k),
            a(1, k) * a(1, k),
            a(2, k) * a(2, k),
            a(1, k) * a(2, k),
        ]);
    }
    for (k, m) in [(0, 1), (0, 2), (1, 2)] {
        rows.push(vec![
            q(2) * a(0, k) * a(0, m),
            a(0, k) * a(1, m) + a(0, m) * a(1, k),
            a(0, k) * a(2, m) + a(0, m) * a(2, k),
            // (L_j x)^2 puts 2 a_jk a_jm on x_k x_m; dropping the 2 breaks
            // det(A) = M^4
            q(2) * a(1, k) * a(1, m),
            q(2) * a(2, k) * a(2, m),
            a(1, k) * a(2, m) + a(1, m) * a(2, k),
        ]);
    }
    RationalMatrix::from_rows(rows).unwrap()
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let tables: [(usize, [u64; 5], [u64; 5]); 2] = [(2, [2, 3, 4, 5, 6], [1, 3, 6, 10, 15]), (3, [3, 6, 10, 15, 21], [1, 4, 10, 20, 35])];
    let mut rng = Lcg(2024);
    for (n, sizes, powers) in tables {
        let l = random_nonsingular(&mut rng, n);
        let m = l.determinant().unwrap();
        for d in 1..=5u32 {
            let block = build_block(&l, d).unwrap();
            let i = (d - 1) as usize;
            out.check(block.size() as u64 == sizes[i], || format!("n {n} d {d}: size {}", block.size()));
            out.check(det_exponent(n, d) == powers[i], || format!("n {n} d {d}: power {}", det_exponent(n, d)));
            out.check(det_block(&l, d).unwrap() == Pow::pow(&m, powers[i]), || {
                format!("n {n} d {d}: det_block is not M^{}", powers[i])
            });
        }
    }
    let mut count = 0;
    for n in 1..=4usize {
        for d in 1..=4u32 {
            for _ in 0..50 {
                let l = random_nonsingular(&mut rng, n);
                let expected: BigRational = Pow::pow(&l.determinant().unwrap(), det_exponent(n, d));
                let det = build_block(&l, d).unwrap().entries().determinant().unwrap();
                out.check(det == expected, || format!("n {n} d {d}: det {det} != {expected} for {l}"));
                count += 1;
            }
        }
    }
    for _ in 0..20 {
        let l = random_nonsingular(&mut rng, 3);
        let m = l.determinant().unwrap();
        let a = matrix_a(&l);
        let det_a = a.determinant().unwrap();
        out.check(det_a == Pow::pow(&m, 4u32), || format!("det(A) = {det_a}, M = {m}"));
        // A is the transposed degree-2 block with rows and columns permuted
        let ut = build_block(&l, 2).unwrap().entries().transpose();
        let perm = [0usize, 3, 5, 1, 2, 4];
        let unknowns = [0usize, 1, 2, 3, 5, 4];
        for (r, &pr) in perm.iter().enumerate() {
            for (c, &pc) in unknowns.iter().enumerate() {
                out.check(a.get(r, c) == ut.get(pr, pc), || format!("A[{r}][{c}] differs from U^T"));
            }
        }
    }
    out.summary = format!("tables for n = 2, 3 reproduced; {count} random blocks obey det = (det L)^C(d+n-1,n); det(A) = M^4");
    out
}

fn criterion_4(ledger: &mut Ledger) -> Outcome {
    let mut out = Outcome::new();
    let mut max_degree_seen = 0;
    for seed in 0..300u64 {
        let n = 2 + (seed % 3) as usize;
        let mut params = TameParams::new(n);
        params.max_degree = Some(5);
        params.linear = LinearKind::General;
        let k = random_tame(&params, seed).unwrap();
        max_degree_seen = max_degree_seen.max(k.map.degree().unwrap_or(0));
        let cap = default_cap(&k.map);
        let block = match ledger.invert(&k.map, cap) {
            Ok(r) => r,
            Err(e) => {
                out.failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        let oracle = invert_oracle(&k.map, cap).unwrap();
        out.check(block.inverse_blocks == oracle.inverse_blocks, || format!("seed {seed}: methods disagree"));
        out.check(block.certificate, || format!("seed {seed}: {:?}", block.status));
        let g = block.inverse();
        out.check(g == k.inverse, || format!("seed {seed}: inverse differs from ground truth"));
        out.check(
            k.map.compose(&g).unwrap().is_identity() && g.compose(&k.map).unwrap().is_identity(),
            || format!("seed {seed}: composition is not the identity"),
        );
        let reciprocal = Polynomial::constant(n, BigRational::one() / &k.jacobian_constant);
        out.check(jacobian_det(&g) == reciprocal, || format!("seed {seed}: det J_G != 1/M"));
    }
    out.summary = format!("300 tame maps (n = 2..4, degree up to {max_degree_seen}): methods agree, round trips exact");
    out
}

fn criterion_5(ledger: &mut Ledger) -> Outcome {
    let mut out = Outcome::new();
    let mut probed = 0;
    for seed in 0..100u64 {
        let n = 2 + (seed % 4) as usize;
        let k = random_bcw(n, seed).unwrap();
        let cap = default_cap(&k.map).max(4);
        let r = match ledger.invert(&k.map, cap) {
            Ok(r) => r,
            Err(e) => {
                out.failures.push(format!("seed {seed}: {e}"));
                continue;
            }
        };
        out.check(r.status == InversionStatus::PolynomialInverseCertified { degree: 3 }, || {
            format!("seed {seed}: {:?}", r.status)
        });
        let g = r.inverse();
        out.check(g == k.inverse, || format!("seed {seed}: not the expected u + c (ell . u)^3"));
        let cubic_only = g
            .components()
            .iter()
            .all(|p| p.terms().all(|(e, _)| e.degree() == 1 || e.degree() == 3));
        out.check(cubic_only, || format!("seed {seed}: inverse has non-cubic nonlinear terms"));
        for (d, block) in r.residuum.range(3..) {
            probed += 1;
            out.check(block.is_zero(), || format!("seed {seed}: nonzero residuum at d = {d}"));
        }
    }
    out.summary = format!("100 rank-one cubic maps (n = 2..5): cubic inverses certified, {probed} residuum blocks at d >= 3 all zero");
    out
}

fn cofactor(l: &RationalMatrix, i: usize, j: usize) -> BigRational {
    let n = l.rows();
    if n == 1 {
        return q(1);
    }
    let rows: Vec<Vec<BigRational>> = (0..n)
        .filter(|&r| r != i)
        .map(|r| (0..n).filter(|&c| c != j).map(|c| l.get(r, c).clone()).collect())
        .collect();
    let minor = RationalMatrix::from_rows(rows).unwrap().determinant().unwrap();
    if (i + j).is_multiple_of(2) {
        minor
    } else {
        -minor
    }
}

fn criterion_6(ledger: &Ledger) -> Outcome {
    let mut out = Outcome::new();
    for (idx, map) in ledger.maps.iter().enumerate() {
        let report = check_jacobi(map);
        out.check(report.violations.is_empty(), || format!("generated map {idx} reports violations"));
    }
    let step = (ledger.maps.len() / 100).max(1);
    let mut perturbed_count = 0;
    for t in 0..100usize {
        let map = &ledger.maps[(t * step) % ledger.maps.len()];
        let n = map.num_vars();
        let l = map.linear_part();
        let m = l.determinant().unwrap();
        let i = t % n;
        let j = (0..n).find(|&j| !cofactor(&l, i, j).is_zero()).expect("row of adj(L) is nonzero");
        let delta = q(1 + (t % 3) as i64);
        let mut comps = map.components().to_vec();
        let bump = Polynomial::var(n, j).pow(2).scale(&delta);
        comps[i] = &comps[i] + &bump;
        let perturbed = PolyMap::new(comps).unwrap();
        perturbed_count += 1;

        let report = check_jacobi(&perturbed);
        out.check(!report.violations.is_empty(), || format!("perturbation {t}: no violation reported"));
        let excess = &jacobian_det(&perturbed) - &Polynomial::constant(n, m.clone());
        for (e, v) in &report.violations {
            out.check(&excess.coeff(e) == v, || format!("perturbation {t}: value at {e:?} differs"));
        }
        out.check(report.violations.len() == excess.len(), || format!("perturbation {t}: violation count"));
        // d/dx_j of delta x_j^2 adds 2 delta x_j times cofactor (i, j) of J
        let predicted = q(2) * &delta * cofactor(&l, i, j);
        let reported = report
            .violations
            .iter()
            .find(|(e, _)| *e == Exponent::unit(n, j))
            .map(|(_, v)| v.clone());
        out.check(reported == Some(predicted.clone()), || {
            format!("perturbation {t}: x{} coefficient {reported:?}, expected {predicted}", j + 1)
        });
    }
    out.summary = format!(
        "{} generated maps satisfy every condition; {perturbed_count} perturbations flagged with exact values",
        ledger.maps.len()
    );
    out
}

fn criterion_7(ledger: &Ledger) -> Outcome {
    let mut out = Outcome::new();
    for d in &ledger.inconsistencies {
        out.failures.push(format!("inconsistency: {d}"));
    }
    for u in &ledger.unchecked {
        out.failures.push(format!("block not checked: {u}"));
    }
    out.summary = format!(
        "{} block-scheme runs, {} blocks with U V = I verified, no inconsistent determinations",
        ledger.runs, ledger.blocks_checked
    );
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let square = parse_map("u1 = x1 + x1^2\nu2 = x2").unwrap().map;
    match invert_block_scheme(&square, 4) {
        Err(Error::NonConstantJacobian { violations, .. }) => {
            out.check(violations == vec![(Exponent::new(vec![1, 0]), q(2))], || {
                format!("violations {violations:?}")
            });
        }
        other => out.failures.push(format!("(x + x^2, y) gave {other:?}")),
    }
    let nested = parse_map("u1 = x1 + x2^2 + 2 x1^2*x2 + x1^4\nu2 = x2 + x1^2").unwrap().map;
    for cap in 1..4 {
        let r = invert_block_scheme(&nested, cap).unwrap();
        out.check(r.status == InversionStatus::CapReached { cap } && !r.certificate, || {
            format!("cap {cap}: {:?}", r.status)
        });
        let o = invert_oracle(&nested, cap).unwrap();
        out.check(!o.certificate, || format!("oracle cap {cap}: {:?}", o.status));
    }
    match parse_map("u1 = x1\n# comment\nu2 = x2 - 5/2") {
        Err(e) => {
            out.check(e.line == 3, || format!("constant reported on line {}", e.line));
            out.check(matches!(e.kind, ParseErrorKind::ConstantTerm { .. }), || format!("kind {:?}", e.kind));
        }
        Ok(_) => out.failures.push("constant term accepted".into()),
    }
    let mut sink = Vec::new();
    let mut err = Vec::new();
    let path = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance_constant.txt");
    std::fs::write(&path, "u1 = x1 + 1\n").unwrap();
    let code = jacinv_cli::run(["jacinv", "check", path.to_str().unwrap()], &mut sink, &mut err);
    out.check(code == jacinv_cli::EXIT_USAGE, || format!("cli exit code {code}"));
    out.summary = "non-constant Jacobian, small caps and constant terms rejected as specified".into();
    out
}

fn main() {
    let mut ledger = Ledger::default();
    let mut all_ok = true;
    let mut report = |number: u32, limit: Duration, run: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if elapsed > limit {
            outcome.failures.push(format!("took {elapsed:.2?}, limit {limit:?}"));
        }
        let status = if outcome.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {number}: {status}: {} [{elapsed:.2?}]", outcome.summary);
        for f in outcome.failures.iter().take(10) {
            println!("    {f}");
        }
        all_ok &= outcome.failures.is_empty();
    };
    let zero_time = Duration::from_secs(3600);
    report(1, Duration::from_secs(5), &mut || criterion_1(&mut ledger));
    report(2, Duration::from_secs(10), &mut || criterion_2(&mut ledger));
    report(3, Duration::from_secs(60), &mut criterion_3);
    report(4, Duration::from_secs(120), &mut || criterion_4(&mut ledger));
    report(5, Duration::from_secs(60), &mut || criterion_5(&mut ledger));
    report(6, zero_time, &mut || criterion_6(&ledger));
    report(7, zero_time, &mut || criterion_7(&ledger));
    report(8, zero_time, &mut criterion_8);
    if !all_ok {
        std::process::exit(1);
    }
}
