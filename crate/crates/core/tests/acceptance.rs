//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use goppa_cyclic::cyclic::{
    extract_generator, predict_generator, reduce_exponents, word_polynomial,
};
use goppa_cyclic::gf2m::{FieldElement, FieldSpec, TowerEmbedding};
use goppa_cyclic::goppa::{
    admissible_poly, build_code, extended_support, factors_into_orbit_polynomials, orbit_support,
    satisfies_invariance, AdmissiblePair, Coefficients, GoppaInstance, Variant,
};
use goppa_cyclic::harness::{
    find_matrix, first_free_orbit, reproduce_example, sweep, tower_for, SweepConfig,
};
use goppa_cyclic::linbin::{BinaryCode, BitVec, FieldMatrix};
use goppa_cyclic::poly::{minimal_polynomial_gf2, Polynomial};
use goppa_cyclic::projline::{orbit_of, partition, spectral, MoebiusMap, ProjPoint, SpectralData};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gf2(text: &str) -> Polynomial {
    Polynomial::parse_gf2(text).unwrap()
}

fn literal(m: u32, matrix: &str) -> SpectralData {
    let f = FieldSpec::new(m, None).unwrap();
    let map = MoebiusMap::parse(&f, matrix, 0).unwrap();
    spectral(&map, &TowerEmbedding::new(&f).unwrap()).unwrap()
}

fn example_passes(id: &str) -> Result<goppa_cyclic::harness::ExampleReport, String> {
    let rep = reproduce_example(id).map_err(|e| e.to_string())?;
    let bad: Vec<_> = rep
        .checks
        .iter()
        .filter(|c| !c.ok)
        .map(|c| c.name.clone())
        .collect();
    ensure(bad.is_empty(), || format!("failed checks {bad:?}"))?;
    Ok(rep)
}

/// Supports L and L' and the codes of g₁^s g₂^t on them.
fn both_codes(spec: &SpectralData, s: u32, t: u32) -> Vec<BinaryCode> {
    let map = &spec.working_map;
    let g = admissible_poly(spec, s, t, Coefficients::Working)
        .unwrap()
        .g;
    let l = orbit_support(&first_free_orbit(map, spec.n).unwrap()).unwrap();
    vec![
        build_code(&GoppaInstance::new(l, g.clone(), Variant::Expurgated).unwrap()),
        build_code(&GoppaInstance::new(extended_support(map), g, Variant::Extended).unwrap()),
    ]
}

fn nine_point_codes() -> Outcome {
    let spec = literal(6, "[[g^7,0],[1,g^-7]]");
    let f = spec.base_field().clone();
    let t = &f.from_log(7) + &f.from_log(-7);
    let want = &gf2("x+1") * &gf2("x^6+x^3+1");
    let x = Polynomial::parse_over(&f, "x").unwrap();
    let xt = Polynomial::linear(&t);
    let l = orbit_of(&spec.map, &ProjPoint::Finite(f.from_log(2))).finite_points();
    let l_ext = extended_support(&spec.map);
    let mut count = 0;
    for g in [x.clone(), x.square(), xt.clone(), xt.square()] {
        for (support, variant) in [(&l, Variant::Expurgated), (&l_ext, Variant::Extended)] {
            let code =
                build_code(&GoppaInstance::new(support.clone(), g.clone(), variant).unwrap());
            let rep = extract_generator(&code, true).map_err(|e| e.to_string())?;
            ensure((rep.n, rep.k, rep.d) == (9, 2, Some(6)), || {
                format!("[{}, {}, {:?}]", rep.n, rep.k, rep.d)
            })?;
            ensure(rep.generator.as_ref() == Some(&want), || {
                format!("generator {:?}", rep.generator)
            })?;
            count += 1;
        }
    }
    for (s, tt) in [(1, 0), (0, 1)] {
        ensure(
            predict_generator(&spec, s, tt).unwrap().generator == want,
            || "prediction".into(),
        )?;
    }
    let rep = example_passes("3.13")?;
    Ok(format!(
        "{count} literal codes [9,2,6], {} seeded cases",
        rep.cases.len()
    ))
}

fn twenty_one_point_codes() -> Outcome {
    let rep = example_passes("3.12")?;
    let allowed = [
        &gf2("x+1") * &gf2("x^6+x^4+x^2+x+1"),
        &gf2("x+1") * &gf2("x^6+x^5+x^4+x^2+1"),
    ];
    for c in &rep.cases {
        ensure((c.n, c.k, c.d) == (21, 14, Some(4)), || {
            format!("{}: [{}, {}, {:?}]", c.label, c.n, c.k, c.d)
        })?;
        let g = gf2(c.generator_human.as_deref().unwrap_or("0"));
        ensure(allowed.contains(&g) && c.matches, || {
            format!("{}: generator {g:?}", c.label)
        })?;
    }
    Ok(format!("{} cases [21,14,4]", rep.cases.len()))
}

fn seventeen_point_codes() -> Outcome {
    let rep = example_passes("3.14")?;
    for c in &rep.cases {
        ensure((c.n, c.k, c.d) == (17, 8, Some(6)) && c.matches, || {
            format!("{} failed", c.label)
        })?;
    }
    // the literal map reproduces the printed self-reciprocal factor
    let spec = literal(4, "[[g^11,g^5],[g^3,g^6]]");
    let m = minimal_polynomial_gf2(&spec.rho);
    ensure(m == gf2("x^8+x^5+x^4+x^3+1") && m == m.reciprocal(), || {
        format!("m_rho = {m:?}")
    })?;
    ensure(m == minimal_polynomial_gf2(&spec.rho_inv), || {
        "m_rho != m_rho^-1".into()
    })?;
    Ok(format!(
        "{} cases [17,8,6], m_rho self-reciprocal",
        rep.cases.len()
    ))
}

fn single_power_table() -> Outcome {
    let rep = example_passes("3.20")?;
    let mut tight = 0;
    let mut slack = 0;
    for c in &rep.cases {
        let e = c.s.max(c.t);
        let want = match e {
            3 | 4 => (11, 6),
            5 | 6 => (5, 10),
            _ => (3, 12),
        };
        ensure((c.k, c.d) == (want.0, Some(want.1)) && c.matches, || {
            format!("{} failed", c.label)
        })?;
        let bch = c.bch.as_ref().ok_or("missing bound")?;
        ensure(bch.run_holds && bch.distance_holds, || {
            format!("{}: bound {}", c.label, bch.bound)
        })?;
        let d = c.d.unwrap() as u32;
        if e == 3 {
            ensure(d == bch.bound, || "bound not tight at s = 3".into())?;
            tight += 1;
        }
        if e == 5 || e == 7 {
            ensure(d > bch.bound, || format!("no slack at exponent {e}"))?;
            slack += 1;
        }
    }
    Ok(format!(
        "{} cases, {tight} tight and {slack} slack bounds",
        rep.cases.len()
    ))
}

fn mixed_power_table() -> Outcome {
    let rep = example_passes("3.24")?;
    for c in &rep.cases {
        let want = match (c.s, c.t) {
            (1, 1) => (8, 6),
            (1, 3) | (1, 5) => (5, 10),
            (1, 7) | (7, 1) => (3, 12),
            _ => (2, 14),
        };
        ensure((c.k, c.d) == (want.0, Some(want.1)) && c.matches, || {
            format!("{} failed", c.label)
        })?;
        ensure(c.designed_distance.is_none(), || {
            "mixed powers carry no designed distance".into()
        })?;
    }
    Ok(format!(
        "{} cases, intersection identity holds",
        rep.cases.len()
    ))
}

fn random_sweep() -> Outcome {
    let sum = sweep(&SweepConfig::new(200, 20240611));
    ensure(sum.ok(), || {
        format!(
            "failures {:?} errors {:?}",
            sum.failures.iter().map(|f| &f.label).collect::<Vec<_>>(),
            sum.errors
        )
    })?;
    ensure(sum.reducible > 0 && sum.irreducible > 0, || {
        "one branch never sampled".into()
    })?;
    ensure(sum.expurgated > 0 && sum.extended > 0, || {
        "one variant never sampled".into()
    })?;
    ensure(sum.by_field.len() == 3, || {
        format!("fields sampled {:?}", sum.by_field)
    })?;
    ensure(sum.zero_codes > 0, || "no zero codes hit".into())?;
    Ok(format!(
        "{} passed, {} skipped, {} zero codes, {} reducible / {} irreducible",
        sum.passed, sum.skipped, sum.zero_codes, sum.reducible, sum.irreducible
    ))
}

fn derivative(p: &Polynomial) -> Polynomial {
    let f = p.field();
    let coeffs: Vec<FieldElement> = (1..=p.degree().unwrap_or(0))
        .map(|i| if i % 2 == 1 { p.coeff(i) } else { f.zero() })
        .collect();
    Polynomial::from_elements(f, &coeffs).unwrap()
}

fn squaring_leaves_codes_unchanged() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut done = 0;
    while done < 50 {
        let m = if done % 2 == 0 { 4 } else { 6 };
        let f = FieldSpec::new(m, None).unwrap();
        let r = rng.gen_range(1..=3);
        let mut bits: Vec<u32> = (0..r).map(|_| rng.gen_range(0..f.size())).collect();
        bits.push(1);
        let g = Polynomial::from_bits(&f, bits).unwrap();
        if g.gcd(&derivative(&g)).unwrap().degree() != Some(0) {
            continue;
        }
        let mut pts: Vec<FieldElement> = f
            .elements()
            .filter(|a| !g.eval(a).unwrap().is_zero())
            .collect();
        pts.shuffle(&mut rng);
        pts.truncate(rng.gen_range(2 * r + 1..=pts.len().min(20)));
        let c1 = build_code(&GoppaInstance::new(pts.clone(), g.clone(), Variant::Plain).unwrap());
        let c2 = build_code(&GoppaInstance::new(pts, g.square(), Variant::Plain).unwrap());
        ensure(c1 == c2, || format!("codes of g and g^2 differ for {g:?}"))?;
        done += 1;
    }
    let mut instances = 0;
    for (m, n, red) in [
        (4, 5, true),
        (4, 15, true),
        (4, 17, false),
        (6, 9, true),
        (6, 21, true),
        (6, 13, false),
    ] {
        let f = FieldSpec::new(m, None).unwrap();
        let spec = spectral(
            &find_matrix(&f, n, red, 7).unwrap(),
            &tower_for(&f).unwrap(),
        )
        .unwrap();
        if n + 1 == f.size() as u64 {
            continue;
        }
        for (s, t) in [(1, 0), (0, 1)] {
            let once = both_codes(&spec, s, t);
            let twice = both_codes(&spec, 2 * s, 2 * t);
            ensure(once == twice, || {
                format!("squared g changes the code for n = {n}")
            })?;
            instances += 1;
        }
    }
    Ok(format!(
        "{done} squarefree instances, {instances} squared admissible instances"
    ))
}

fn brute_kernel(h: &FieldMatrix) -> usize {
    (0u64..1 << h.ncols())
        .filter(|&w| {
            h.mul_binary(&BitVec::from_u64(w, h.ncols()))
                .iter()
                .all(FieldElement::is_zero)
        })
        .count()
}

fn oracle_suites() -> Outcome {
    // (a) gcd generator = least-degree nonzero codeword
    let mut codes: Vec<BinaryCode> = Vec::new();
    for (m, n, red) in [
        (4, 5, true),
        (4, 17, false),
        (6, 9, true),
        (6, 21, true),
        (6, 13, false),
        (6, 65, false),
    ] {
        let f = FieldSpec::new(m, None).unwrap();
        let spec = spectral(
            &find_matrix(&f, n, red, 3).unwrap(),
            &tower_for(&f).unwrap(),
        )
        .unwrap();
        for (s, t) in [(1, 0), (0, 1), (1, 1), (3, 0), (2, 3), (5, 5)] {
            if ((s + t) as u64) < spec.n - 1 {
                codes.extend(both_codes(&spec, s, t));
            }
        }
    }
    let mut checked = 0;
    for code in codes.iter().filter(|c| c.k() <= 14 && c.k() > 0) {
        let rows = code.generator().rows();
        let least = (1u64..1 << code.k())
            .map(|mask| {
                let mut w = BitVec::zeros(code.n());
                for (i, r) in rows.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        w.xor_assign(r);
                    }
                }
                word_polynomial(&w)
            })
            .min_by_key(|p| p.degree())
            .unwrap();
        let rep = extract_generator(code, true).map_err(|e| e.to_string())?;
        ensure(rep.generator.as_ref() == Some(&least), || {
            "gcd generator differs from least codeword".into()
        })?;
        checked += 1;
    }
    // (b) bit expansion kernel against brute force
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..40 {
        let f = FieldSpec::new(rng.gen_range(2..=6), None).unwrap();
        let rows: Vec<Vec<FieldElement>> = (0..3)
            .map(|_| {
                (0..8)
                    .map(|_| f.element(rng.gen_range(0..f.size())).unwrap())
                    .collect()
            })
            .collect();
        let h = FieldMatrix::from_rows(&f, &rows).unwrap();
        let code = BinaryCode::from_parity_check(&h.expand_to_bits());
        ensure(1usize << code.k() == brute_kernel(&h), || {
            "kernel size mismatch".into()
        })?;
        for w in code.generator().rows() {
            ensure(h.mul_binary(w).iter().all(FieldElement::is_zero), || {
                "basis word outside kernel".into()
            })?;
        }
    }
    // (c) factorization into orbit polynomials agrees with the invariance identity
    let f = FieldSpec::new(3, None).unwrap();
    let tower = tower_for(&f).unwrap();
    let elements: Vec<FieldElement> = f.elements().collect();
    let mut polys = Vec::new();
    for r in 1..=3usize {
        for lower in 0..(1usize << (3 * r)) {
            let mut bits: Vec<u32> = (0..r).map(|i| ((lower >> (3 * i)) & 7) as u32).collect();
            bits.push(1);
            polys.push(Polynomial::from_bits(&f, bits).unwrap());
        }
    }
    let (mut maps, mut agreed, mut invariant) = (0, 0, 0);
    for a in &elements {
        for c in elements.iter().skip(1) {
            for d in &elements {
                let b = (&(a * d) + &f.one()).checked_div(c).unwrap();
                let map = MoebiusMap::normalize(a, &b, c, d, 0).unwrap();
                let Ok(spec) = spectral(&map, &tower) else {
                    continue;
                };
                if spec.n == 3 {
                    continue;
                }
                maps += 1;
                let orbits = partition(&spec.working_map).unwrap();
                for g in &polys {
                    let lhs = satisfies_invariance(&map, g).unwrap();
                    let lifted = if spec.reducible {
                        g.clone()
                    } else {
                        g.embed(&spec.tower).unwrap()
                    };
                    let rhs = factors_into_orbit_polynomials(&lifted, &orbits).unwrap();
                    ensure(lhs == rhs, || format!("disagreement for {map} and {g:?}"))?;
                    agreed += 1;
                    invariant += usize::from(lhs);
                }
            }
        }
    }
    Ok(format!(
        "{checked} generators vs least codewords, 40 kernels, {agreed} pairs over {maps} maps ({invariant} invariant)"
    ))
}

fn structural_invariants() -> Outcome {
    let mut maps = 0;
    for m in [3u32, 4, 5, 6] {
        let f = FieldSpec::new(m, None).unwrap();
        let q = f.size() as u64;
        let tower = tower_for(&f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(u64::from(m));
        for _ in 0..12 {
            let e: Vec<FieldElement> = (0..3)
                .map(|_| f.element(rng.gen_range(0..f.size())).unwrap())
                .collect();
            let (a, c, d) = (&e[0], &e[1], &e[2]);
            if c.is_zero() || (a + d).is_zero() {
                continue;
            }
            let b = (&(a * d) + &f.one()).checked_div(c).unwrap();
            let map = MoebiusMap::normalize(a, &b, c, d, 0).unwrap();
            let spec = spectral(&map, &tower).map_err(|e| e.to_string())?;
            let n = spec.n;
            let base = partition(&map).unwrap();
            let lens: Vec<u64> = base.iter().map(|o| o.len() as u64).collect();
            let total: u64 = lens.iter().sum();
            ensure(total == q + 1, || {
                "partition does not cover the line".into()
            })?;
            if spec.reducible {
                ensure(lens.iter().filter(|&&l| l == 1).count() == 2, || {
                    "expected two fixed points".into()
                })?;
                ensure(
                    lens.iter().filter(|&&l| l == n).count() as u64 == (q - 1) / n,
                    || "orbit count".into(),
                )?;
            } else {
                ensure(
                    lens.iter().all(|&l| l == n) && lens.len() as u64 == (q + 1) / n,
                    || "orbit count".into(),
                )?;
                let ext = partition(&spec.working_map).unwrap();
                let q2 = q * q;
                ensure(ext.iter().filter(|o| o.len() == 1).count() == 2, || {
                    "fixed points in the extension".into()
                })?;
                ensure(
                    ext.iter().filter(|o| o.len() as u64 == n).count() as u64 == (q2 - 1) / n,
                    || "orbit count over the extension".into(),
                )?;
            }
            // orbit of inf is P applied to the powers of rho
            let p = spec.p_map();
            let mut want: HashSet<ProjPoint> = (1..n)
                .map(|i| p.apply(&ProjPoint::Finite(spec.rho.pow(i as i64).unwrap())))
                .collect();
            want.insert(ProjPoint::Infinity);
            let got: HashSet<ProjPoint> = orbit_of(&spec.working_map, &ProjPoint::Infinity)
                .points()
                .iter()
                .cloned()
                .collect();
            ensure(got == want, || "orbit of inf differs from P(rho^i)".into())?;
            // odd exponents suffice for the lcm
            for s in 1..=10u32 {
                let mut full = gf2("1");
                for i in 1..=s {
                    full = full
                        .lcm(&minimal_polynomial_gf2(
                            &spec.rho_inv.pow(i as i64).unwrap(),
                        ))
                        .unwrap();
                }
                let mut odd = gf2("1");
                for i in reduce_exponents(s) {
                    odd = odd
                        .lcm(&minimal_polynomial_gf2(
                            &spec.rho_inv.pow(i as i64).unwrap(),
                        ))
                        .unwrap();
                }
                ensure(full == odd, || format!("odd reduction differs at s = {s}"))?;
            }
            maps += 1;
        }
    }
    // degree-1 admissibility on a GF(8) map of order 7
    let f = FieldSpec::new(3, None).unwrap();
    let spec = spectral(
        &find_matrix(&f, 7, true, 1).unwrap(),
        &tower_for(&f).unwrap(),
    )
    .unwrap();
    let pair = AdmissiblePair::new(&spec);
    let passing: Vec<Polynomial> = f
        .elements()
        .map(|b| Polynomial::linear(&b))
        .filter(|g| satisfies_invariance(&spec.map, g).unwrap())
        .collect();
    ensure(
        passing.len() == 2 && passing.contains(&pair.g1) && passing.contains(&pair.g2),
        || format!("degree-1 admissible set {passing:?}"),
    )?;
    Ok(format!(
        "{maps} random maps, degree-1 admissibility exact on GF(8)"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "length-9 codes over GF(64) are [9,2,6] with generator (x+1)(x^6+x^3+1)",
            Duration::from_secs(1),
            nine_point_codes,
        ),
        (
            "length-21 codes of g1, g2 and their squares are [21,14,4]",
            Duration::from_secs(1),
            twenty_one_point_codes,
        ),
        (
            "length-17 codes from the GF(16) tower are [17,8,6]",
            Duration::from_secs(2),
            seventeen_point_codes,
        ),
        (
            "single powers g1^s, g2^s: parameter table and BCH bound",
            Duration::from_secs(5),
            single_power_table,
        ),
        (
            "mixed powers g1^s g2^t: parameter table and intersection identity",
            Duration::from_secs(5),
            mixed_power_table,
        ),
        (
            "200-case seeded sweep over GF(16), GF(64), GF(256)",
            Duration::from_secs(60),
            random_sweep,
        ),
        (
            "squaring a squarefree Goppa polynomial keeps the code",
            Duration::from_secs(10),
            squaring_leaves_codes_unchanged,
        ),
        (
            "oracle suites: least codeword, bit expansion, orbit factorization",
            Duration::from_secs(30),
            oracle_suites,
        ),
        (
            "structural invariants of partitions, orbits and exponents",
            Duration::from_secs(10),
            structural_invariants,
        ),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > *budget => Err(format!("{detail}; over budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!(
                "PASS {}: {name} ({detail}; {:.2}s)",
                i + 1,
                took.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name}: {why} ({:.2}s)", i + 1, took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
