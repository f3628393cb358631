//! Additive maps `R → Z/n` and the symmetric-algebra certificate.
//!
//! A functional is determined by its values `ψ_i = ψ(e_i)` on the additive
//! generators. Well-definedness on `Z/d_i` forces `d_i ψ_i ≡ 0 (mod n)`, so
//! `ψ_i` ranges over the `d_i` multiples of `n / d_i` and `|Hom(R, Z/n)| = |R|`.
//!
//! `ψ` is non-degenerate when its kernel contains no nonzero ideal. Every
//! nonzero ideal contains a nonzero principal ideal, and `ψ(r t)` is additive in
//! `t`, so this is tested as: for every `r ≠ 0` some basis vector `e_j` has
//! `ψ(r e_j) ≠ 0`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::arith::mul_mod;
use crate::error::{Error, Result};
use crate::ring::{FiniteRing, RingElement, RingId};
use crate::spec::RingSpec;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearFunctional {
    ring: RingId,
    modulus: u64,
    values: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalRecord {
    pub ring: String,
    pub n: u64,
    pub psi: Vec<u64>,
}

impl LinearFunctional {
    /// Functional on `ring` (valued in `Z/ring.modulus()`) with the given
    /// generator values.
    pub fn new(ring: &FiniteRing, values: Vec<u64>) -> Result<LinearFunctional> {
        if values.len() != ring.rank() {
            return Err(Error::FunctionalArity {
                expected: ring.rank(),
                got: values.len(),
            });
        }
        let n = ring.modulus();
        for (index, (&value, &d)) in values.iter().zip(ring.divisors()).enumerate() {
            if value >= n || mul_mod(value, d, n) != 0 {
                return Err(Error::FunctionalConstraint {
                    index,
                    value,
                    modulus: n,
                });
            }
        }
        Ok(LinearFunctional {
            ring: ring.id(),
            modulus: n,
            values,
        })
    }

    pub fn zero(ring: &FiniteRing) -> LinearFunctional {
        LinearFunctional {
            ring: ring.id(),
            modulus: ring.modulus(),
            values: vec![0; ring.rank()],
        }
    }

    pub fn ring_id(&self) -> RingId {
        self.ring
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub(crate) fn eval_coords(&self, coords: &[u64]) -> u64 {
        coords
            .iter()
            .zip(&self.values)
            .fold(0, |acc, (&a, &v)| (acc + mul_mod(a, v, self.modulus)) % self.modulus)
    }

    pub fn apply(&self, r: &RingElement) -> Result<u64> {
        if r.ring_id() != self.ring {
            return Err(Error::RingMismatch);
        }
        Ok(self.eval_coords(r.coords()))
    }

    /// Serialized form: the ring's label (its spec hash when built from a
    /// spec), the modulus and the generator values.
    pub fn to_record(&self, ring: &FiniteRing) -> Result<FunctionalRecord> {
        if ring.id() != self.ring {
            return Err(Error::RingMismatch);
        }
        Ok(FunctionalRecord {
            ring: ring.label(),
            n: self.modulus,
            psi: self.values.clone(),
        })
    }

    /// Inverse of [`to_record`](Self::to_record); the record must name `ring`.
    pub fn from_record(ring: &FiniteRing, record: &FunctionalRecord) -> Result<LinearFunctional> {
        if record.ring != ring.label() || record.n != ring.modulus() {
            return Err(Error::RingMismatch);
        }
        LinearFunctional::new(ring, record.psi.clone())
    }

    /// Compose with the embedding `Z/n → Z/m`, `a ↦ (m/n) a`. The result lives
    /// on the same ring regarded as a `Z/m`-algebra.
    pub fn induce(&self, m: u64) -> Result<LinearFunctional> {
        if m == 0 || !m.is_multiple_of(self.modulus) {
            return Err(Error::NotDivisible(self.modulus, m));
        }
        let scale = m / self.modulus;
        Ok(LinearFunctional {
            ring: self.ring.with_modulus(m),
            modulus: m,
            values: self.values.iter().map(|&v| v * scale).collect(),
        })
    }

    /// `a ↦ ψ(c · lift(a))` on a quotient `small = A/g` of `big = A/f`, where
    /// `c` is the cofactor `f/g` in `big` and `lift` copies coordinates,
    /// padding with zeros. The small ring's basis must be a prefix of the big
    /// ring's basis with compatible coordinate lifts, which holds for
    /// `Z/g ← Z/f`, `F_q[t]/t^b ← F_q[t]/t^a` and `Z[x]/(h, g) ← Z[x]/(h, f)`.
    ///
    /// The result is valued in `Z/n` for the big ring's `n` and belongs to
    /// `small.with_scalar_modulus(n)`.
    pub fn quotient(&self, big: &FiniteRing, small: &FiniteRing, cofactor: &RingElement) -> Result<LinearFunctional> {
        if self.ring != big.id() || cofactor.ring_id() != big.id() {
            return Err(Error::RingMismatch);
        }
        if small.rank() > big.rank() {
            return Err(Error::InvalidSpec(
                "quotient ring has larger rank than ambient ring".into(),
            ));
        }
        let target = small.with_scalar_modulus(self.modulus)?;
        let values = (0..small.rank())
            .map(|i| {
                let mut lift = small.basis(i).coords().to_vec();
                lift.resize(big.rank(), 0);
                if lift.iter().zip(big.divisors()).any(|(&a, &d)| a >= d) {
                    return Err(Error::BadCoordinates(lift));
                }
                let lifted = big.element(lift)?;
                self.apply(&big.mul(cofactor, &lifted)?)
            })
            .collect::<Result<Vec<_>>>()?;
        LinearFunctional::new(&target, values)
    }

    /// `ψ_r = ψ(r ·)` as a functional.
    pub fn twist(&self, ring: &FiniteRing, r: &RingElement) -> Result<LinearFunctional> {
        if ring.id() != self.ring || r.ring_id() != self.ring {
            return Err(Error::RingMismatch);
        }
        Ok(LinearFunctional {
            ring: self.ring,
            modulus: self.modulus,
            values: twist_values(ring, self, r.coords()),
        })
    }
}

/// Transport modes for [`transport_functional`].
#[derive(Debug, Clone, Copy)]
pub enum Transport<'a> {
    Induce(u64),
    Quotient {
        big: &'a FiniteRing,
        small: &'a FiniteRing,
        cofactor: &'a RingElement,
    },
}

pub fn transport_functional(psi: &LinearFunctional, mode: Transport<'_>) -> Result<LinearFunctional> {
    match mode {
        Transport::Induce(m) => psi.induce(m),
        Transport::Quotient { big, small, cofactor } => psi.quotient(big, small, cofactor),
    }
}

fn twist_values(ring: &FiniteRing, psi: &LinearFunctional, r: &[u64]) -> Vec<u64> {
    (0..ring.rank())
        .map(|j| {
            let mut e = vec![0; ring.rank()];
            e[j] = 1 % ring.divisors()[j];
            psi.eval_coords(&ring.mul_coords(r, &e))
        })
        .collect()
}

fn check_ring(ring: &FiniteRing, psi: &LinearFunctional) -> Result<()> {
    if ring.id() != psi.ring {
        return Err(Error::RingMismatch);
    }
    Ok(())
}

/// Every element of `Hom(R, Z/n)`, generator values ascending in mixed-radix
/// order (first generator fastest).
pub fn enumerate_functionals(ring: &FiniteRing) -> impl Iterator<Item = LinearFunctional> + '_ {
    let n = ring.modulus();
    (0..ring.size()).map(move |i| {
        let steps = ring.coords_at(i);
        let values = steps.iter().zip(ring.divisors()).map(|(&k, &d)| k * (n / d)).collect();
        LinearFunctional {
            ring: ring.id(),
            modulus: n,
            values,
        }
    })
}

/// A nonzero `r` whose principal ideal lies in `ker ψ`, if there is one.
pub fn kernel_ideal_witness(ring: &FiniteRing, psi: &LinearFunctional) -> Result<Option<RingElement>> {
    check_ring(ring, psi)?;
    Ok((1..ring.size())
        .map(|i| ring.coords_at(i))
        .find(|r| twist_values(ring, psi, r).iter().all(|&v| v == 0))
        .map(|coords| ring.element(coords).expect("enumerated coordinates are reduced")))
}

pub fn is_nondegenerate(ring: &FiniteRing, psi: &LinearFunctional) -> Result<bool> {
    Ok(kernel_ideal_witness(ring, psi)?.is_none())
}

/// First non-degenerate functional in enumeration order.
pub fn find_nondegenerate(ring: &FiniteRing) -> Option<LinearFunctional> {
    enumerate_functionals(ring).find(|psi| kernel_ideal_witness(ring, psi).unwrap().is_none())
}

/// The standard non-degenerate functional for each constructor:
/// identity on `Z/n`, the coefficient of the group identity on a group
/// algebra, the top coefficient on monogenic and polynomial quotients, and
/// the sum of factor functionals (each pushed into `Z/declared_n`) on a
/// product. Raw structure specs have none.
pub fn canonical_functional(spec: &RingSpec) -> Result<LinearFunctional> {
    let ring = spec.build()?;
    let (modulus, values) = canonical_values(spec)?;
    debug_assert_eq!(modulus, ring.modulus());
    LinearFunctional::new(&ring, values)
}

fn canonical_values(spec: &RingSpec) -> Result<(u64, Vec<u64>)> {
    match spec {
        RingSpec::Zn { n } => Ok((*n, vec![1 % n])),
        RingSpec::GroupAlgebra { n, factors } => {
            let size: u64 = factors.iter().product();
            let mut v = vec![0; size as usize];
            v[0] = 1 % n;
            Ok((*n, v))
        }
        RingSpec::Monogenic { n, g } => {
            let m = g.len().saturating_sub(1);
            let mut v = vec![0; m];
            if m > 0 {
                v[m - 1] = 1 % n;
            }
            Ok((*n, v))
        }
        RingSpec::PolyQuotient { p, .. } => {
            // coefficient of y^(e-1) t^(k-1): the last basis vector
            let ring = spec.build()?;
            let mut v = vec![0; ring.rank()];
            *v.last_mut().unwrap() = 1;
            Ok((*p, v))
        }
        RingSpec::Product { specs, declared_n } => {
            let mut values = Vec::new();
            for s in specs {
                let (n, v) = canonical_values(s)?;
                if *declared_n % n != 0 {
                    return Err(Error::NotDivisible(n, *declared_n));
                }
                let scale = declared_n / n;
                values.extend(v.into_iter().map(|x| x * scale));
            }
            Ok((*declared_n, values))
        }
        RingSpec::Structure { .. } => Err(Error::NoCanonicalFunctional),
    }
}

/// Outcome of [`certify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Symmetric {
        psi: LinearFunctional,
        canonical: bool,
    },
    /// One witness per functional: a nonzero `r` with `⟨r⟩ ⊆ ker ψ`.
    NotSymmetric {
        witnesses: Vec<(LinearFunctional, RingElement)>,
    },
}

impl Certificate {
    pub fn is_symmetric(&self) -> bool {
        matches!(self, Certificate::Symmetric { .. })
    }

    pub fn functional(&self) -> Option<&LinearFunctional> {
        match self {
            Certificate::Symmetric { psi, .. } => Some(psi),
            Certificate::NotSymmetric { .. } => None,
        }
    }
}

/// Decide whether `ring` is a symmetric `Z/n`-algebra. The canonical
/// functional of `spec` is preferred when it exists and is non-degenerate;
/// otherwise all of `Hom(R, Z/n)` is searched.
pub fn certify(ring: &FiniteRing, spec: Option<&RingSpec>) -> Result<Certificate> {
    if let Some(spec) = spec {
        if let Ok(psi) = canonical_functional(spec) {
            if psi.ring == ring.id() && is_nondegenerate(ring, &psi)? {
                return Ok(Certificate::Symmetric { psi, canonical: true });
            }
        }
    }
    let mut witnesses = Vec::new();
    for psi in enumerate_functionals(ring) {
        match kernel_ideal_witness(ring, &psi)? {
            None => return Ok(Certificate::Symmetric { psi, canonical: false }),
            Some(r) => witnesses.push((psi, r)),
        }
    }
    Ok(Certificate::NotSymmetric { witnesses })
}

/// The map `r ↦ ψ_r` for every element, indexed like the ring's elements.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    ring: RingId,
    psi: LinearFunctional,
    // row r holds ψ_r(e_j) for each generator j
    rows: Vec<Vec<u64>>,
    bijective: bool,
}

impl CharacterTable {
    pub fn ring_id(&self) -> RingId {
        self.ring
    }

    pub fn functional(&self) -> &LinearFunctional {
        &self.psi
    }

    /// Whether `r ↦ ψ_r` is injective, hence a bijection onto `Hom(R, Z/n)`.
    pub fn is_bijective(&self) -> bool {
        self.bijective
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `ψ_r` for the element at index `r`.
    pub fn twisted(&self, r: usize) -> LinearFunctional {
        LinearFunctional {
            ring: self.ring,
            modulus: self.psi.modulus,
            values: self.rows[r].clone(),
        }
    }
}

pub fn build_character_table(ring: &FiniteRing, psi: &LinearFunctional) -> Result<CharacterTable> {
    check_ring(ring, psi)?;
    let rows: Vec<Vec<u64>> = (0..ring.size())
        .map(|i| twist_values(ring, psi, &ring.coords_at(i)))
        .collect();
    let distinct: HashSet<&Vec<u64>> = rows.iter().collect();
    let bijective = distinct.len() == rows.len();
    Ok(CharacterTable {
        ring: ring.id(),
        psi: psi.clone(),
        rows,
        bijective,
    })
}

/// Values `ψ(e_i e_j) mod n`, row-major. Since `ψ(r t) = Σ r_i t_j ψ(e_i e_j)`,
/// this is all that is needed to pair two elements.
pub(crate) fn gram(ring: &FiniteRing, psi: &LinearFunctional) -> Vec<u64> {
    let m = ring.rank();
    let mut out = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            out.push(psi.eval_coords(ring.product(i, j)));
        }
    }
    out
}
