//! Cayley graphs `Γ(R, S)` and their exact spectra.
//!
//! With a non-degenerate `ψ`, every additive character of `R` is
//! `t ↦ ζ_n^{ψ(r t)}` for a unique `r`, so the eigenvalue attached to `r` is
//! `λ_r = Σ_{s ∈ S} ζ_n^{ψ(r s)}`, computed here in `Z[ζ_n]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::arith::{gcd, mobius, totient, units_mod};
use crate::cyclotomic::{bigint_from_json, bigint_to_json, CyclotomicBasis, CyclotomicInt};
use crate::error::{Error, Result};
use crate::functional::{enumerate_functionals, is_nondegenerate, LinearFunctional};
use crate::ring::{FiniteRing, RingId};

/// Largest ring accepted by [`numeric_spectrum_oracle`].
pub const ORACLE_CAP: usize = 4096;
/// Largest ring accepted by [`dft_matrix`].
pub const DFT_CAP: usize = 256;
/// Most negation classes [`VerifyMode::Exhaustive`] will enumerate.
pub const EXHAUSTIVE_CLASS_CAP: usize = 20;

/// An undirected Cayley graph: `0 ∉ S` and `S = -S`, stored as sorted indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CayleyGraph {
    ring: RingId,
    connection: Vec<usize>,
}

impl CayleyGraph {
    pub fn new(ring: &FiniteRing, indices: impl IntoIterator<Item = usize>) -> Result<CayleyGraph> {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        for &s in &set {
            if s >= ring.size() {
                return Err(Error::IndexOutOfRange(s, ring.size()));
            }
        }
        if set.contains(&0) {
            return Err(Error::ZeroInConnectionSet);
        }
        for &s in &set {
            let neg = ring.index_of_coords(&ring.neg_coords(&ring.coords_at(s)));
            if !set.contains(&neg) {
                return Err(Error::NotSymmetricSet(s));
            }
        }
        Ok(CayleyGraph {
            ring: ring.id(),
            connection: set.into_iter().collect(),
        })
    }

    pub fn ring_id(&self) -> RingId {
        self.ring
    }

    /// Sorted element indices of `S`.
    pub fn connection_set(&self) -> &[usize] {
        &self.connection
    }

    pub fn degree(&self) -> usize {
        self.connection.len()
    }

    fn check(&self, ring: &FiniteRing) -> Result<()> {
        if self.ring != ring.id() {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }
}

/// Orbits of `R` under multiplication by `(Z/n)^×`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    ring: RingId,
    orbits: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
}

impl OrbitPartition {
    /// Orbits, each sorted, ordered by smallest element; orbit 0 is `{0}`.
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_of(&self, index: usize) -> usize {
        self.orbit_of[index]
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Whether a set of indices is a union of orbits.
    pub fn is_union_of_orbits(&self, set: &[usize]) -> bool {
        let members: BTreeSet<usize> = set.iter().copied().collect();
        members
            .iter()
            .all(|&s| self.orbits[self.orbit_of[s]].iter().all(|t| members.contains(t)))
    }
}

pub fn scalar_orbits(ring: &FiniteRing) -> OrbitPartition {
    let units = units_mod(ring.modulus());
    let size = ring.size();
    let mut orbit_of = vec![usize::MAX; size];
    let mut orbits = Vec::new();
    for start in 0..size {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let coords = ring.coords_at(start);
        let mut orbit: Vec<usize> = units
            .iter()
            .map(|&a| ring.index_of_coords(&ring.scale_coords(&coords, a as i64)))
            .collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &i in &orbit {
            orbit_of[i] = orbits.len();
        }
        orbits.push(orbit);
    }
    OrbitPartition {
        ring: ring.id(),
        orbits,
        orbit_of,
    }
}

/// `G_n(d) = {m ∈ Z/n : gcd(m, n) = d}` for every divisor `d` of `n`.
pub fn gcd_classes(n: u64) -> BTreeMap<u64, Vec<u64>> {
    let mut classes: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for m in 0..n {
        classes.entry(gcd(m, n)).or_default().push(m);
    }
    classes
}

/// Nonzero elements grouped into pairs `{s, -s}` (singletons when `s = -s`),
/// ordered by smallest index.
pub fn negation_classes(ring: &FiniteRing) -> Vec<Vec<usize>> {
    let mut seen = vec![false; ring.size()];
    let mut classes = Vec::new();
    for s in 1..ring.size() {
        if seen[s] {
            continue;
        }
        let neg = ring.index_of_coords(&ring.neg_coords(&ring.coords_at(s)));
        seen[s] = true;
        seen[neg] = true;
        classes.push(if neg == s { vec![s] } else { vec![s, neg] });
    }
    classes
}

pub fn is_stable(ring: &FiniteRing, graph: &CayleyGraph) -> Result<bool> {
    graph.check(ring)?;
    let members: BTreeSet<usize> = graph.connection.iter().copied().collect();
    let units = units_mod(ring.modulus());
    Ok(graph.connection.iter().all(|&s| {
        let coords = ring.coords_at(s);
        units
            .iter()
            .all(|&a| members.contains(&ring.index_of_coords(&ring.scale_coords(&coords, a as i64))))
    }))
}

/// Per-ring data reused across many connection sets: `ψ_r(e_j)` for every `r`.
struct Pairing<'a> {
    ring: &'a FiniteRing,
    n: u64,
    // twisted[r * m + j] = ψ(r e_j)
    twisted: Vec<u64>,
    coords: Vec<Vec<u64>>,
    basis: std::sync::Arc<CyclotomicBasis>,
}

impl<'a> Pairing<'a> {
    fn new(ring: &'a FiniteRing, psi: &LinearFunctional) -> Pairing<'a> {
        let m = ring.rank();
        let n = psi.modulus();
        let gram = crate::functional::gram(ring, psi);
        let coords: Vec<Vec<u64>> = (0..ring.size()).map(|i| ring.coords_at(i)).collect();
        let mut twisted = Vec::with_capacity(ring.size() * m);
        for r in &coords {
            for j in 0..m {
                let v = r.iter().enumerate().fold(0u128, |acc, (i, &a)| {
                    (acc + a as u128 * gram[i * m + j] as u128) % n as u128
                });
                twisted.push(v as u64);
            }
        }
        Pairing {
            ring,
            n,
            twisted,
            coords,
            basis: CyclotomicBasis::get(n),
        }
    }

    /// Characters indexed by functionals rather than by elements.
    fn from_characters(ring: &'a FiniteRing) -> Pairing<'a> {
        let n = ring.modulus();
        let twisted = enumerate_functionals(ring).flat_map(|f| f.values().to_vec()).collect();
        let coords = (0..ring.size()).map(|i| ring.coords_at(i)).collect();
        Pairing {
            ring,
            n,
            twisted,
            coords,
            basis: CyclotomicBasis::get(n),
        }
    }

    fn pair(&self, r: usize, s: usize) -> u64 {
        let m = self.ring.rank();
        let w = &self.twisted[r * m..(r + 1) * m];
        let v = self.coords[s]
            .iter()
            .zip(w)
            .fold(0u128, |acc, (&a, &b)| (acc + a as u128 * b as u128) % self.n as u128);
        v as u64
    }

    fn counts(&self, r: usize, set: &[usize]) -> Vec<i64> {
        let mut counts = vec![0i64; self.n as usize];
        for &s in set {
            counts[self.pair(r, s) as usize] += 1;
        }
        counts
    }

    fn eigenvalue(&self, r: usize, set: &[usize]) -> CyclotomicInt {
        self.basis.from_counts(&self.counts(r, set))
    }

    fn is_integral(&self, set: &[usize]) -> bool {
        (1..self.ring.size()).all(|r| self.basis.counts_are_integral(&self.counts(r, set)))
    }
}

/// One eigenvalue of a [`SpectrumReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenvalue {
    /// Index of the element `r` (or of the functional, for character-indexed reports).
    pub r: usize,
    pub value: CyclotomicInt,
    pub integer: Option<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    pub ring: String,
    pub n: u64,
    pub connection: Vec<usize>,
    pub eigenvalues: Vec<Eigenvalue>,
    pub integral: bool,
}

impl SpectrumReport {
    fn assemble(ring: &FiniteRing, n: u64, graph: &CayleyGraph, values: Vec<CyclotomicInt>) -> Self {
        let eigenvalues: Vec<Eigenvalue> = values
            .into_iter()
            .enumerate()
            .map(|(r, value)| Eigenvalue {
                r,
                integer: value.as_integer(),
                value,
            })
            .collect();
        let integral = eigenvalues.iter().all(|e| e.integer.is_some());
        SpectrumReport {
            ring: ring.label(),
            n,
            connection: graph.connection.clone(),
            eigenvalues,
            integral,
        }
    }

    /// Distinct eigenvalues with multiplicities, in a fixed order.
    pub fn multiset(&self) -> Vec<(CyclotomicInt, usize)> {
        let mut counts: BTreeMap<&CyclotomicInt, usize> = BTreeMap::new();
        for e in &self.eigenvalues {
            *counts.entry(&e.value).or_default() += 1;
        }
        counts.into_iter().map(|(v, c)| (v.clone(), c)).collect()
    }

    /// Short hash of the eigenvalue multiset.
    pub fn digest(&self) -> String {
        let body: Vec<Value> = self
            .multiset()
            .iter()
            .map(|(v, c)| json!([v.coeffs().iter().map(bigint_to_json).collect::<Vec<_>>(), c]))
            .collect();
        let digest = Sha256::digest(Value::Array(body).to_string().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Real parts under `ζ ↦ exp(2πi/n)`, sorted ascending.
    pub fn numeric_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.eigenvalues.iter().map(|e| e.value.to_complex().0).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    pub fn to_json(&self) -> Value {
        let eigenvalues: Vec<Value> = self
            .eigenvalues
            .iter()
            .map(|e| {
                json!({
                    "r": e.r,
                    "coeffs": e.value.coeffs().iter().map(bigint_to_json).collect::<Vec<_>>(),
                    "int": e.integer.as_ref().map(bigint_to_json).unwrap_or(Value::Null),
                })
            })
            .collect();
        json!({
            "ring": self.ring,
            "n": self.n,
            "S": self.connection,
            "integral": self.integral,
            "eigenvalues": eigenvalues,
        })
    }

    /// Parse a report and re-check it: every `int` must agree with its
    /// coefficients, `integral` must agree with the entries, and `λ_0 = |S|`.
    pub fn from_json(value: &Value) -> Result<SpectrumReport> {
        let bad = |msg: &str| Error::InvalidSpec(format!("spectrum report: {msg}"));
        let ring = value["ring"].as_str().ok_or_else(|| bad("missing ring"))?.to_string();
        let n = value["n"].as_u64().filter(|&n| n > 0).ok_or_else(|| bad("missing n"))?;
        let connection: Vec<usize> = value["S"]
            .as_array()
            .ok_or_else(|| bad("missing S"))?
            .iter()
            .map(|v| v.as_u64().map(|x| x as usize).ok_or_else(|| bad("bad S entry")))
            .collect::<Result<_>>()?;
        let integral = value["integral"].as_bool().ok_or_else(|| bad("missing integral"))?;
        let mut eigenvalues = Vec::new();
        for entry in value["eigenvalues"]
            .as_array()
            .ok_or_else(|| bad("missing eigenvalues"))?
        {
            let r = entry["r"].as_u64().ok_or_else(|| bad("bad r"))? as usize;
            let coeffs = entry["coeffs"]
                .as_array()
                .ok_or_else(|| bad("bad coeffs"))?
                .iter()
                .map(|c| bigint_from_json(c).map_err(|e| bad(&e)))
                .collect::<Result<Vec<_>>>()?;
            let value = CyclotomicInt::from_coeffs(n, coeffs)?;
            let integer = match &entry["int"] {
                Value::Null => None,
                v => Some(bigint_from_json(v).map_err(|e| bad(&e))?),
            };
            if integer != value.as_integer() {
                return Err(bad(&format!("int field of eigenvalue {r} disagrees with coeffs")));
            }
            eigenvalues.push(Eigenvalue { r, value, integer });
        }
        if integral != eigenvalues.iter().all(|e| e.integer.is_some()) {
            return Err(bad("integral flag disagrees with eigenvalues"));
        }
        if let Some(first) = eigenvalues.iter().find(|e| e.r == 0) {
            if first.integer != Some(BigInt::from(connection.len())) {
                return Err(bad("eigenvalue at r = 0 is not |S|"));
            }
        }
        Ok(SpectrumReport {
            ring,
            n,
            connection,
            eigenvalues,
            integral,
        })
    }
}

fn require_nondegenerate(ring: &FiniteRing, psi: &LinearFunctional) -> Result<()> {
    if psi.ring_id() != ring.id() {
        return Err(Error::RingMismatch);
    }
    if !is_nondegenerate(ring, psi)? {
        return Err(Error::DegenerateFunctional);
    }
    Ok(())
}

/// Exact spectrum, `λ_r` for each element `r` in index order.
pub fn spectrum(ring: &FiniteRing, graph: &CayleyGraph, psi: &LinearFunctional) -> Result<SpectrumReport> {
    graph.check(ring)?;
    require_nondegenerate(ring, psi)?;
    let pairing = Pairing::new(ring, psi);
    let values: Vec<CyclotomicInt> = (0..ring.size())
        .into_par_iter()
        .map(|r| pairing.eigenvalue(r, &graph.connection))
        .collect();
    Ok(SpectrumReport::assemble(ring, psi.modulus(), graph, values))
}

/// Exact spectrum indexed by all of `Hom(R, Z/n)` instead of by elements.
/// Needs no non-degenerate functional, so it also covers non-symmetric rings.
pub fn spectrum_by_characters(ring: &FiniteRing, graph: &CayleyGraph) -> Result<SpectrumReport> {
    graph.check(ring)?;
    let pairing = Pairing::from_characters(ring);
    let values: Vec<CyclotomicInt> = (0..ring.size())
        .into_par_iter()
        .map(|r| pairing.eigenvalue(r, &graph.connection))
        .collect();
    Ok(SpectrumReport::assemble(ring, ring.modulus(), graph, values))
}

pub fn is_integral(ring: &FiniteRing, graph: &CayleyGraph, psi: &LinearFunctional) -> Result<bool> {
    graph.check(ring)?;
    require_nondegenerate(ring, psi)?;
    Ok(Pairing::new(ring, psi).is_integral(&graph.connection))
}

/// Which connection sets [`verify_theorem`] tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyMode {
    Single(Vec<usize>),
    /// Every union of negation classes.
    Exhaustive,
    /// Random unions of negation classes, each class kept with probability 1/2.
    Sample {
        count: usize,
        seed: u64,
    },
}

/// Stability and integrality of one connection set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetVerdict {
    pub connection: Vec<usize>,
    pub stable: bool,
    pub integral: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub tested: usize,
    pub stable_integral: usize,
    pub stable_nonintegral: usize,
    pub unstable_integral: usize,
    pub unstable_nonintegral: usize,
    /// Sets where integrality and stability disagree.
    pub violations: Vec<Vec<usize>>,
    pub verdicts: Vec<SetVerdict>,
}

impl VerificationReport {
    fn from_verdicts(verdicts: Vec<SetVerdict>) -> VerificationReport {
        let mut report = VerificationReport {
            tested: verdicts.len(),
            ..Default::default()
        };
        for v in &verdicts {
            match (v.stable, v.integral) {
                (true, true) => report.stable_integral += 1,
                (true, false) => report.stable_nonintegral += 1,
                (false, true) => report.unstable_integral += 1,
                (false, false) => report.unstable_nonintegral += 1,
            }
            if v.stable != v.integral {
                report.violations.push(v.connection.clone());
            }
        }
        report.verdicts = verdicts;
        report
    }

    pub fn is_consistent(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tested": self.tested,
            "cells": {
                "stable_integral": self.stable_integral,
                "stable_nonintegral": self.stable_nonintegral,
                "unstable_integral": self.unstable_integral,
                "unstable_nonintegral": self.unstable_nonintegral,
            },
            "consistent": self.is_consistent(),
            "violations": self.violations,
        })
    }
}

/// The connection sets selected by `mode`, in a deterministic order.
pub fn symmetric_sets(ring: &FiniteRing, mode: &VerifyMode) -> Result<Vec<Vec<usize>>> {
    let classes = negation_classes(ring);
    let union = |mask: &dyn Fn(usize) -> bool| -> Vec<usize> {
        let mut set: Vec<usize> = classes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask(*i))
            .flat_map(|(_, c)| c.clone())
            .collect();
        set.sort_unstable();
        set
    };
    match mode {
        VerifyMode::Single(set) => {
            let graph = CayleyGraph::new(ring, set.iter().copied())?;
            Ok(vec![graph.connection])
        }
        VerifyMode::Exhaustive => {
            if classes.len() > EXHAUSTIVE_CLASS_CAP {
                return Err(Error::SizeCap {
                    what: "negation classes",
                    size: classes.len(),
                    cap: EXHAUSTIVE_CLASS_CAP,
                });
            }
            Ok((0u64..1 << classes.len())
                .map(|bits| union(&|i| bits >> i & 1 == 1))
                .collect())
        }
        VerifyMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok((0..*count)
                .map(|_| {
                    let keep: Vec<bool> = (0..classes.len()).map(|_| rng.gen_bool(0.5)).collect();
                    union(&|i| keep[i])
                })
                .collect())
        }
    }
}

/// Test `integral ⟺ stable` over the connection sets chosen by `mode`.
pub fn verify_theorem(ring: &FiniteRing, psi: &LinearFunctional, mode: &VerifyMode) -> Result<VerificationReport> {
    require_nondegenerate(ring, psi)?;
    let sets = symmetric_sets(ring, mode)?;
    let pairing = Pairing::new(ring, psi);
    let orbits = scalar_orbits(ring);
    let verdicts: Vec<SetVerdict> = sets
        .into_par_iter()
        .map(|set| SetVerdict {
            stable: orbits.is_union_of_orbits(&set),
            integral: pairing.is_integral(&set),
            connection: set,
        })
        .collect();
    Ok(VerificationReport::from_verdicts(verdicts))
}

/// Like [`verify_theorem`] but with integrality decided from the full
/// character family, so it runs on rings with no non-degenerate functional.
pub fn verify_by_characters(ring: &FiniteRing, mode: &VerifyMode) -> Result<VerificationReport> {
    let sets = symmetric_sets(ring, mode)?;
    let pairing = Pairing::from_characters(ring);
    let orbits = scalar_orbits(ring);
    let verdicts: Vec<SetVerdict> = sets
        .into_par_iter()
        .map(|set| SetVerdict {
            stable: orbits.is_union_of_orbits(&set),
            integral: pairing.is_integral(&set),
            connection: set,
        })
        .collect();
    Ok(VerificationReport::from_verdicts(verdicts))
}

/// Eigenvalues of the 0/1 adjacency matrix from a floating-point symmetric
/// eigensolver, sorted ascending.
pub fn numeric_spectrum_oracle(ring: &FiniteRing, graph: &CayleyGraph) -> Result<Vec<f64>> {
    graph.check(ring)?;
    let size = ring.size();
    if size > ORACLE_CAP {
        return Err(Error::SizeCap {
            what: "ring order",
            size,
            cap: ORACLE_CAP,
        });
    }
    let members: BTreeSet<usize> = graph.connection.iter().copied().collect();
    let coords: Vec<Vec<u64>> = (0..size).map(|i| ring.coords_at(i)).collect();
    let mut adjacency = DMatrix::<f64>::zeros(size, size);
    for a in 0..size {
        let neg_a = ring.neg_coords(&coords[a]);
        for b in 0..size {
            let diff = ring.index_of_coords(&ring.add_coords(&coords[b], &neg_a));
            if members.contains(&diff) {
                adjacency[(a, b)] = 1.0;
            }
        }
    }
    let mut values: Vec<f64> = adjacency.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(values)
}

/// `c_n(r) = Σ_{a ∈ (Z/n)^×} ζ_n^{a r}` by the closed form `μ(n/g) φ(n) / φ(n/g)`, `g = gcd(r, n)`.
pub fn ramanujan_sum(n: u64, r: u64) -> i64 {
    let g = gcd(r % n, n);
    let q = n / g;
    mobius(q) * (totient(n) / totient(q)) as i64
}

/// The matrix `(ζ_n^{ψ(r t)})_{r,t}`, stored by exponent.
#[derive(Debug, Clone)]
pub struct DftMatrix {
    n: u64,
    size: usize,
    exponents: Vec<u64>,
}

pub fn dft_matrix(ring: &FiniteRing, psi: &LinearFunctional) -> Result<DftMatrix> {
    if psi.ring_id() != ring.id() {
        return Err(Error::RingMismatch);
    }
    let size = ring.size();
    if size > DFT_CAP {
        return Err(Error::SizeCap {
            what: "ring order",
            size,
            cap: DFT_CAP,
        });
    }
    let pairing = Pairing::new(ring, psi);
    let mut exponents = Vec::with_capacity(size * size);
    for r in 0..size {
        for t in 0..size {
            exponents.push(pairing.pair(r, t));
        }
    }
    Ok(DftMatrix {
        n: psi.modulus(),
        size,
        exponents,
    })
}

impl DftMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn exponent(&self, r: usize, t: usize) -> u64 {
        self.exponents[r * self.size + t]
    }

    pub fn entry(&self, r: usize, t: usize) -> CyclotomicInt {
        CyclotomicInt::root_of_unity(self.n, self.exponent(r, t))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.size).all(|r| (0..r).all(|t| self.exponent(r, t) == self.exponent(t, r)))
    }

    /// `A v` for an integer vector `v`.
    pub fn apply(&self, v: &[BigInt]) -> Vec<CyclotomicInt> {
        assert_eq!(v.len(), self.size, "vector length must equal the ring order");
        (0..self.size)
            .map(|r| crate::cyclotomic::reduce_weighted(self.n, (0..self.size).map(|t| (self.exponent(r, t), &v[t]))))
            .collect()
    }

    /// `A 1_S`, the spectrum of `Γ(R, S)` in element order.
    pub fn apply_indicator(&self, set: &[usize]) -> Vec<CyclotomicInt> {
        let mut v = vec![BigInt::zero(); self.size];
        for &s in set {
            v[s] = BigInt::from(1);
        }
        self.apply(&v)
    }

    /// `(A A^*)_{r,s} = Σ_t ζ^{ψ(rt) - ψ(st)}`.
    pub fn gram_entry(&self, r: usize, s: usize) -> CyclotomicInt {
        let basis = CyclotomicBasis::get(self.n);
        let mut counts = vec![0i64; self.n as usize];
        for t in 0..self.size {
            let e = (self.exponent(r, t) + self.n - self.exponent(s, t)) % self.n;
            counts[e as usize] += 1;
        }
        basis.from_counts(&counts)
    }

    /// Whether `A A^* = |R| I` exactly.
    pub fn is_scaled_unitary(&self) -> bool {
        let order = BigInt::from(self.size);
        (0..self.size).all(|r| {
            (0..self.size).all(|s| {
                let want = if r == s { order.clone() } else { BigInt::zero() };
                self.gram_entry(r, s).as_integer() == Some(want)
            })
        })
    }
}

/// Whether `S ∪ {0}` is closed under addition. Over a ring of prime
/// characteristic this is the same as being an `F_p`-subspace.
pub fn is_additively_closed(ring: &FiniteRing, set: &[usize]) -> Result<bool> {
    let mut members: BTreeSet<usize> = set.iter().copied().collect();
    members.insert(0);
    for &a in &members {
        if a >= ring.size() {
            return Err(Error::IndexOutOfRange(a, ring.size()));
        }
    }
    let coords: Vec<Vec<u64>> = members.iter().map(|&a| ring.coords_at(a)).collect();
    Ok(coords.iter().all(|a| {
        coords
            .iter()
            .all(|b| members.contains(&ring.index_of_coords(&ring.add_coords(a, b))))
    }))
}

/// Graphviz rendering: vertices labelled by coordinates, one edge per
/// unordered pair `{a, b}` with `b - a ∈ S`.
pub fn to_dot(ring: &FiniteRing, graph: &CayleyGraph) -> Result<String> {
    graph.check(ring)?;
    let members: BTreeSet<usize> = graph.connection.iter().copied().collect();
    let mut out = String::from("graph cayley {\n");
    for v in 0..ring.size() {
        let label = ring.element_at(v)?.to_string();
        writeln!(out, "  {v} [label=\"{label}\"];").unwrap();
    }
    for a in 0..ring.size() {
        let ca = ring.coords_at(a);
        for &s in &members {
            let b = ring.index_of_coords(&ring.add_coords(&ca, &ring.coords_at(s)));
            if a < b {
                writeln!(out, "  {a} -- {b};").unwrap();
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}

/// Convert an exact spectrum's integers to `i64`, when they all fit.
pub fn integer_spectrum(report: &SpectrumReport) -> Option<Vec<i64>> {
    report
        .eigenvalues
        .iter()
        .map(|e| e.integer.as_ref().and_then(|v| v.to_i64()))
        .collect()
}
