//! End-to-end acceptance run: one `[PASS]`/`[FAIL]` line per criterion.

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use integral_cayley::arith::{divisors, gcd, units_mod};
use integral_cayley::{
    build_character_table, canonical_functional, certify, dft_matrix, enumerate_functionals,
    induced_dirichlet_is_trivial, is_integral, is_nondegenerate, numeric_spectrum_oracle, paley_graph,
    power_residue_character, quadratic_character, quartic_residue_character, reduce_sum, scalar_orbits, spectrum,
    symmetric_sets, verify_theorem, CayleyGraph, Certificate, CyclotomicInt, FiniteRing, FqCoeff, LinearFunctional,
    RingSpec, VerifyMode,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn battery() -> Vec<(&'static str, RingSpec)> {
    let mut out: Vec<(&'static str, RingSpec)> = Vec::new();
    for n in 3..=16u64 {
        out.push((Box::leak(format!("Z/{n}").into_boxed_str()), RingSpec::Zn { n }));
    }
    out.push(("Z/2[C2]", RingSpec::GroupAlgebra { n: 2, factors: vec![2] }));
    out.push(("Z/3[C3]", RingSpec::GroupAlgebra { n: 3, factors: vec![3] }));
    out.push(("Z/4[x]/(x^2)", RingSpec::Monogenic { n: 4, g: vec![0, 0, 1] }));
    out.push(("Z[i]/3", RingSpec::gaussian(3)));
    out.push(("F2[t]/t^3", RingSpec::truncated(2, 3)));
    out.push((
        "Z/2 x Z/3",
        RingSpec::Product {
            specs: vec![RingSpec::Zn { n: 2 }, RingSpec::Zn { n: 3 }],
            declared_n: 6,
        },
    ));
    out
}

fn build(spec: &RingSpec) -> Result<(FiniteRing, LinearFunctional), String> {
    let ring = spec.build().map_err(|e| e.to_string())?;
    let psi = canonical_functional(spec).map_err(|e| e.to_string())?;
    Ok((ring, psi))
}

/// Stability straight from the definition: `a·s ∈ S` for every unit `a` of `Z/n`.
fn stable_directly(ring: &FiniteRing, set: &[usize]) -> bool {
    let members: HashSet<usize> = set.iter().copied().collect();
    let units = units_mod(ring.modulus());
    set.iter().all(|&s| {
        let e = ring.element_at(s).unwrap();
        units
            .iter()
            .all(|&a| members.contains(&ring.index_of(&ring.scalar(a as i64, &e).unwrap()).unwrap()))
    })
}

fn criterion_1() -> Outcome {
    let mut total = 0;
    for (name, spec) in battery() {
        let (ring, psi) = build(&spec)?;
        let classes = integral_cayley::negation_classes(&ring).len();
        let mode = if classes <= 16 {
            VerifyMode::Exhaustive
        } else {
            VerifyMode::Sample { count: 500, seed: 1 }
        };
        let report = verify_theorem(&ring, &psi, &mode).map_err(|e| format!("{name}: {e}"))?;
        ensure(report.is_consistent(), || {
            format!("{name}: violations {:?}", report.violations)
        })?;
        for v in &report.verdicts {
            ensure(v.stable == stable_directly(&ring, &v.connection), || {
                format!("{name}: orbit test disagrees with definition on {:?}", v.connection)
            })?;
        }
        total += report.tested;
    }
    Ok(format!(
        "{total} connection sets over {} rings, zero violations",
        battery().len()
    ))
}

fn criterion_2() -> Outcome {
    let mut summary = Vec::new();
    for n in 1..=12u64 {
        let spec = RingSpec::Zn { n };
        let (ring, psi) = build(&spec)?;
        let report = verify_theorem(&ring, &psi, &VerifyMode::Exhaustive).map_err(|e| e.to_string())?;
        let integral: BTreeSet<Vec<usize>> = report
            .verdicts
            .iter()
            .filter(|v| v.integral)
            .map(|v| v.connection.clone())
            .collect();
        // every union of G_n(d) over proper divisors d
        let proper: Vec<u64> = divisors(n).into_iter().filter(|&d| d != n).collect();
        let mut unions = BTreeSet::new();
        for mask in 0u32..1 << proper.len() {
            let chosen: Vec<u64> = (0..proper.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| proper[i])
                .collect();
            let set: Vec<usize> = (1..n)
                .filter(|&m| chosen.contains(&gcd(m, n)))
                .map(|m| m as usize)
                .collect();
            unions.insert(set);
        }
        ensure(integral == unions, || {
            format!("n={n}: integral sets differ from gcd-class unions")
        })?;
        let expected = 1usize << (divisors(n).len() - 1);
        ensure(integral.len() == expected, || {
            format!("n={n}: {} integral sets, expected {expected}", integral.len())
        })?;
        summary.push(format!("{n}:{expected}"));
    }
    Ok(format!("integral set counts {}", summary.join(" ")))
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    // n = 1 is excluded: G_1(1) = {0} is not a valid connection set
    for n in 2..=30u64 {
        let spec = RingSpec::Zn { n };
        let (ring, psi) = build(&spec)?;
        let units: Vec<usize> = units_mod(n).into_iter().map(|u| u as usize).collect();
        let graph = CayleyGraph::new(&ring, units.clone()).map_err(|e| e.to_string())?;
        let report = spectrum(&ring, &graph, &psi).map_err(|e| e.to_string())?;
        for (r, ev) in report.eigenvalues.iter().enumerate() {
            let closed = CyclotomicInt::from_integer(n, BigInt::from(integral_cayley::ramanujan_sum(n, r as u64)));
            let direct = reduce_sum(n, &units.iter().map(|&a| (a as u64 * r as u64) % n).collect::<Vec<_>>());
            ensure(ev.value == closed && ev.value == direct, || {
                format!("n={n} r={r}: {} vs {closed}", ev.value)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} eigenvalues for 2 ≤ n ≤ 30 equal c_n(r) exactly"))
}

fn random_ring(rng: &mut ChaCha8Rng) -> RingSpec {
    loop {
        let spec = match rng.gen_range(0..6) {
            0 => RingSpec::Zn {
                n: rng.gen_range(2..=256),
            },
            1 => {
                let n = rng.gen_range(2..=6);
                let m = rng.gen_range(2..=4);
                RingSpec::GroupAlgebra { n, factors: vec![m] }
            }
            2 => RingSpec::gaussian(rng.gen_range(2..=16)),
            3 => {
                let n = rng.gen_range(2..=5);
                let g: Vec<i64> = (0..3).map(|_| rng.gen_range(-3..=3)).chain([1]).collect();
                RingSpec::Monogenic { n, g }
            }
            4 => RingSpec::truncated([2, 3, 5][rng.gen_range(0..3)], rng.gen_range(1..=3)),
            _ => RingSpec::Product {
                specs: vec![
                    RingSpec::Zn {
                        n: rng.gen_range(2..=8),
                    },
                    RingSpec::gaussian(rng.gen_range(2..=4)),
                ],
                declared_n: 0,
            },
        };
        let spec = match spec {
            RingSpec::Product { specs, .. } => {
                let n = specs
                    .iter()
                    .map(|s| match s {
                        RingSpec::Zn { n } | RingSpec::Monogenic { n, .. } => *n,
                        _ => 1,
                    })
                    .fold(1, integral_cayley::arith::lcm);
                RingSpec::Product { specs, declared_n: n }
            }
            s => s,
        };
        if let Ok(ring) = spec.build() {
            if ring.size() <= 256 {
                return spec;
            }
        }
    }
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let spec = random_ring(&mut rng);
        let ring = spec.build().map_err(|e| e.to_string())?;
        let sets = symmetric_sets(
            &ring,
            &VerifyMode::Sample {
                count: 1,
                seed: rng.gen(),
            },
        )
        .map_err(|e| e.to_string())?;
        let graph = CayleyGraph::new(&ring, sets[0].clone()).map_err(|e| e.to_string())?;
        let report = match certify(&ring, Some(&spec)).map_err(|e| e.to_string())? {
            Certificate::Symmetric { psi, .. } => spectrum(&ring, &graph, &psi),
            Certificate::NotSymmetric { .. } => integral_cayley::spectrum_by_characters(&ring, &graph),
        }
        .map_err(|e| e.to_string())?;
        let mut exact = report.numeric_values();
        let mut numeric = numeric_spectrum_oracle(&ring, &graph).map_err(|e| e.to_string())?;
        exact.sort_by(f64::total_cmp);
        numeric.sort_by(f64::total_cmp);
        let dev = exact
            .iter()
            .zip(&numeric)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        ensure(dev < 1e-6, || format!("trial {trial} ({spec:?}): deviation {dev:e}"))?;
        worst = worst.max(dev);
    }
    Ok(format!("100 random graphs, max deviation {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let mut specs: Vec<RingSpec> = battery().into_iter().map(|(_, s)| s).collect();
    specs.push(RingSpec::GroupAlgebra {
        n: 4,
        factors: vec![2, 2],
    });
    specs.push(RingSpec::Monogenic { n: 6, g: vec![1, 1, 1] });
    specs.push(RingSpec::PolyQuotient {
        p: 2,
        base_poly: vec![1, 1, 1],
        modulus: vec![FqCoeff::Vector(vec![0, 1]), FqCoeff::Prime(0), FqCoeff::Prime(1)],
    });
    specs.push(RingSpec::truncated(3, 2));
    specs.push(RingSpec::Product {
        specs: vec![RingSpec::gaussian(2), RingSpec::truncated(3, 2)],
        declared_n: 6,
    });
    for spec in &specs {
        let (ring, psi) = build(spec)?;
        ensure(is_nondegenerate(&ring, &psi).unwrap(), || {
            format!("canonical functional of {spec:?} is degenerate")
        })?;
    }
    let mut counts = Vec::new();
    for (p, expected) in [(2u64, 8usize), (3, 27)] {
        let spec = RingSpec::square_zero(p, 2);
        let ring = spec.build().map_err(|e| e.to_string())?;
        let count = enumerate_functionals(&ring).count();
        ensure(count == expected, || format!("p={p}: {count} functionals"))?;
        match certify(&ring, Some(&spec)).map_err(|e| e.to_string())? {
            Certificate::Symmetric { .. } => return Err(format!("p={p}: square-zero ring certified symmetric")),
            Certificate::NotSymmetric { witnesses } => {
                ensure(witnesses.len() == expected, || {
                    format!("p={p}: {} witnesses", witnesses.len())
                })?;
                for (psi, r) in &witnesses {
                    ensure(!r.is_zero(), || "zero witness".into())?;
                    for t in ring.principal_ideal(r).unwrap() {
                        ensure(psi.apply(&t).unwrap() == 0, || {
                            format!("p={p}: witness ideal not in ker ψ")
                        })?;
                    }
                }
            }
        }
        counts.push(format!("p={p}: {count} functionals all degenerate"));
    }
    Ok(format!(
        "{} canonical functionals non-degenerate; {}",
        specs.len(),
        counts.join(", ")
    ))
}

fn criterion_6() -> Outcome {
    let mut rings = 0;
    for (name, spec) in battery() {
        let (ring, psi) = build(&spec)?;
        let table = build_character_table(&ring, &psi).map_err(|e| e.to_string())?;
        let hom: HashSet<Vec<u64>> = enumerate_functionals(&ring).map(|f| f.values().to_vec()).collect();
        ensure(hom.len() == ring.size(), || {
            format!("{name}: |Hom| = {} ≠ {}", hom.len(), ring.size())
        })?;
        let image: HashSet<Vec<u64>> = (0..ring.size()).map(|r| table.twisted(r).values().to_vec()).collect();
        ensure(table.is_bijective() && image == hom, || {
            format!("{name}: r ↦ ψ_r is not onto Hom")
        })?;
        rings += 1;
    }
    Ok(format!("{rings} rings: r ↦ ψ_r bijective and |Hom| = |R|"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut rings = 0;
    for (name, spec) in battery() {
        let (ring, psi) = build(&spec)?;
        if ring.size() > 64 {
            continue;
        }
        let a = dft_matrix(&ring, &psi).map_err(|e| e.to_string())?;
        ensure(a.is_scaled_unitary(), || format!("{name}: A A* ≠ |R| I"))?;
        let orbits = scalar_orbits(&ring);
        for _ in 0..20 {
            let weights: Vec<i64> = (0..orbits.len()).map(|_| rng.gen_range(-5..=5)).collect();
            let v: Vec<BigInt> = (0..ring.size())
                .map(|t| BigInt::from(weights[orbits.orbit_of(t)]))
                .collect();
            let image = a.apply(&v);
            let ints: Vec<BigInt> = image
                .iter()
                .map(|c| c.as_integer().ok_or_else(|| format!("{name}: non-integer entry {c}")))
                .collect::<Result<_, _>>()?;
            for orbit in orbits.orbits() {
                ensure(orbit.iter().all(|&t| ints[t] == ints[orbit[0]]), || {
                    format!("{name}: image not orbit-constant")
                })?;
            }
        }
        rings += 1;
    }
    Ok(format!(
        "{rings} rings: A A* = |R| I, 20 orbit-constant vectors each map to orbit-constant integers"
    ))
}

fn criterion_8() -> Outcome {
    let mut cases = Vec::new();
    let mut run =
        |label: String, ring: &FiniteRing, chi: &integral_cayley::MultiplicativeCharacter| -> Result<(), String> {
            let psi = match certify(ring, None).map_err(|e| e.to_string())? {
                Certificate::Symmetric { psi, .. } => psi,
                _ => return Err(format!("{label}: not symmetric")),
            };
            let graph = paley_graph(ring, chi).map_err(|e| e.to_string())?;
            let integral = is_integral(ring, &graph, &psi).map_err(|e| e.to_string())?;
            let trivial = induced_dirichlet_is_trivial(ring, chi, ring.modulus()).map_err(|e| e.to_string())?;
            ensure(integral == trivial, || {
                format!("{label}: integral {integral}, induced trivial {trivial}")
            })?;
            cases.push(format!("{label}:{integral}"));
            Ok(())
        };
    for p in [3u64, 7, 11] {
        let (ring, chi) = quartic_residue_character(&RingSpec::gaussian(p)).map_err(|e| e.to_string())?;
        run(format!("quartic Z[i]/{p}"), &ring, &chi)?;
    }
    for p in [5u64, 13] {
        let ring = RingSpec::Zn { n: p }.build().map_err(|e| e.to_string())?;
        let chi = quadratic_character(&ring).map_err(|e| e.to_string())?;
        run(format!("quadratic Z/{p}"), &ring, &chi)?;
    }
    // quartic character on Z/5, the residue field of 2 + i, with i = 2
    let z5 = RingSpec::Zn { n: 5 }.build().map_err(|e| e.to_string())?;
    if let Ok(chi) = power_residue_character(&z5, 4, &z5.element_at(2).unwrap()) {
        ensure(paley_graph(&z5, &chi).is_err(), || {
            "χ(-1) = -1 should be rejected on Z/5".into()
        })?;
    }
    let spec = RingSpec::gaussian(3);
    let (ring, chi) = quartic_residue_character(&spec).map_err(|e| e.to_string())?;
    let graph = paley_graph(&ring, &chi).map_err(|e| e.to_string())?;
    let report = spectrum(&ring, &graph, &canonical_functional(&spec).unwrap()).map_err(|e| e.to_string())?;
    let mut values: Vec<i64> = integral_cayley::integer_spectrum(&report).ok_or("Z[i]/3 spectrum not integral")?;
    ensure(values[0] == 2, || format!("λ_0 = {}", values[0]))?;
    values.sort_unstable();
    ensure(values == [-1, -1, -1, -1, -1, -1, 2, 2, 2], || {
        format!("Z[i]/3 spectrum {values:?}")
    })?;
    Ok(format!("{}; Z[i]/3 spectrum 2^3 (-1)^6", cases.join(" ")))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut rational, mut irrational) = (0, 0);
    for _ in 0..200 {
        let n: u64 = rng.gen_range(1..=24);
        let value = if rng.gen_bool(0.5) {
            // Galois-stable by construction: a union of gcd classes with integer weights
            let mut total = CyclotomicInt::zero(n);
            for m in 0..n {
                if rng.gen_bool(0.5) {
                    let orbit: Vec<u64> = units_mod(n)
                        .iter()
                        .map(|&a| a * m % n)
                        .collect::<BTreeSet<_>>()
                        .into_iter()
                        .collect();
                    total = &total + &reduce_sum(n, &orbit);
                }
            }
            total
        } else {
            let terms: Vec<u64> = (0..rng.gen_range(0..8)).map(|_| rng.gen_range(0..n)).collect();
            reduce_sum(n, &terms)
        };
        let fixed = units_mod(n)
            .iter()
            .all(|&a| value.galois_act(a as i64).unwrap() == value);
        let integer = value.as_integer();
        ensure(integer.is_some() == fixed, || {
            format!("n={n}: {value} integer={integer:?} fixed={fixed}")
        })?;
        if let Some(k) = integer {
            let (re, im) = value.to_complex();
            ensure(
                im.abs() < 1e-9 && (re - k.to_string().parse::<f64>().unwrap()).abs() < 1e-9,
                || format!("n={n}: embedding of {value} is not {k}"),
            )?;
            rational += 1;
        } else {
            irrational += 1;
        }
    }
    for n in 2..=24u64 {
        let all: Vec<u64> = (0..n).collect();
        ensure(reduce_sum(n, &all).is_zero(), || {
            format!("n={n}: full root sum nonzero")
        })?;
    }
    Ok(format!(
        "200 root sums ({rational} rational, {irrational} not) agree; full sums vanish for n ≤ 24"
    ))
}

fn write_spec(dir: &Path, name: &str, spec: &RingSpec) -> std::path::PathBuf {
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, serde_json::to_string_pretty(spec).unwrap()).unwrap();
    path
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_integral-cayley"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let dir = dir.path();
    let mut spec_files = Vec::new();
    for (i, (name, spec)) in battery().into_iter().enumerate() {
        let path = write_spec(dir, &format!("battery{i}"), &spec);
        let path_s = path.to_str().unwrap().to_string();
        let (code, out) = cli(&["certify", &path_s]);
        let v: Value = serde_json::from_str(&out).map_err(|e| format!("{name}: certify output {e}"))?;
        ensure(code == 0 && v["symmetric"] == true, || {
            format!("{name}: certify exit {code}")
        })?;
        let (code, out) = cli(&["verify", &path_s, "--exhaustive"]);
        let v: Value = serde_json::from_str(&out).map_err(|e| format!("{name}: verify output {e}"))?;
        let cells = &v["cells"];
        ensure(
            code == 0 && cells["stable_nonintegral"] == 0 && cells["unstable_integral"] == 0,
            || format!("{name}: verify exit {code}, cells {cells}"),
        )?;
        if let RingSpec::Zn { n } = spec {
            if n <= 12 {
                let expected = 1usize << (divisors(n).len() - 1);
                ensure(
                    v["integral_sets"] == expected && v["integral_sets_are_gcd_unions"] == true,
                    || format!("{name}: verify reports {} integral sets", v["integral_sets"]),
                )?;
            }
        }
        spec_files.push(path_s);
    }
    for (p, expected) in [(2u64, 8usize), (3, 27)] {
        let path = write_spec(dir, &format!("square_zero{p}"), &RingSpec::square_zero(p, 2));
        let (code, out) = cli(&["certify", path.to_str().unwrap()]);
        let v: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        let witnesses = v["witness_ideals"].as_array().map(Vec::len).unwrap_or(0);
        ensure(code == 3 && v["symmetric"] == false && witnesses == expected, || {
            format!("square-zero p={p}: exit {code}, {witnesses} witnesses")
        })?;
    }
    let truncated = dir.join("truncated.json");
    std::fs::write(&truncated, "{\"kind\": \"zn\", \"n\"").unwrap();
    let (code, _) = cli(&["certify", truncated.to_str().unwrap()]);
    ensure(code == 1, || format!("truncated JSON: exit {code}"))?;
    let big = write_spec(dir, "z45", &RingSpec::Zn { n: 45 });
    let (code, _) = cli(&["verify", big.to_str().unwrap(), "--exhaustive"]);
    ensure(code == 2, || format!("cap exceeded: exit {code}"))?;

    let a = dir.join("a.jsonl");
    let b = dir.join("b.jsonl");
    let mut args = vec!["census", "--no-timestamp", "--specs"];
    args.extend(spec_files.iter().map(String::as_str));
    let mut first = args.clone();
    first.extend(["--out", a.to_str().unwrap()]);
    let (code, summary) = cli(&first);
    let summary: Value = serde_json::from_str(&summary).map_err(|e| e.to_string())?;
    ensure(code == 0 && summary["violations"] == 0, || {
        format!("census exit {code}: {summary}")
    })?;
    let mut second = args.clone();
    second.extend(["--out", b.to_str().unwrap()]);
    let out = Command::new(env!("CARGO_BIN_EXE_integral-cayley"))
        .args(&second)
        .env("INTEGRAL_CAYLEY_THREADS", "1")
        .output()
        .unwrap();
    ensure(out.status.success(), || "second census run failed".into())?;
    let (bytes_a, bytes_b) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    ensure(bytes_a == bytes_b, || "census output differs between runs".into())?;
    let lines = bytes_a.iter().filter(|&&c| c == b'\n').count();
    ensure(lines == summary["records"].as_u64().unwrap() as usize, || {
        "record count mismatch".into()
    })?;
    Ok(format!(
        "{} spec files; census of {lines} records byte-identical across runs",
        spec_files.len() + 4
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("integral iff stable on the battery", criterion_1),
        ("integral sets of Z/n are gcd-class unions", criterion_2),
        ("unitary Cayley graph spectrum is c_n(r)", criterion_3),
        ("exact vs numeric eigenvalues", criterion_4),
        ("symmetric-algebra certification", criterion_5),
        ("character table bijectivity", criterion_6),
        ("DFT matrix properties", criterion_7),
        ("Paley integrality criterion", criterion_8),
        ("Galois fixed points are integers", criterion_9),
        ("CLI contract", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("[PASS] criterion {}: {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
