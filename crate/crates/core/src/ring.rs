//! Finite commutative `Z/n`-algebras given by structure constants.
//!
//! A ring is stored as an additive group `Z/d_1 ⊕ … ⊕ Z/d_m` (every `d_i`
//! dividing the declared scalar modulus `n`) together with the products
//! `e_i e_j = Σ_k c_ijk e_k` of the basis vectors. Elements are coordinate
//! vectors, and the ring's elements are indexed in mixed-radix order with the
//! first coordinate varying fastest.

use std::fmt;

use sha2::{Digest, Sha256};

use crate::arith::{gcd, lcm, mul_mod, reduce_signed};
use crate::error::{Error, Result};

/// Identifies a ring: a fingerprint of its structure plus the scalar modulus.
///
/// Two rings built from the same data get the same id, so elements and
/// functionals survive a rebuild.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingId {
    structure: u64,
    modulus: u64,
}

impl RingId {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The same structure regarded over a different scalar ring.
    pub(crate) fn with_modulus(self, modulus: u64) -> RingId {
        RingId {
            structure: self.structure,
            modulus,
        }
    }
}

impl fmt::Display for RingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}/{}", self.structure, self.modulus)
    }
}

/// An element of a [`FiniteRing`], as reduced mixed-radix coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: RingId,
    coords: Vec<u64>,
}

impl RingElement {
    pub fn ring_id(&self) -> RingId {
        self.ring
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Arithmetic operations accepted by [`FiniteRing::apply`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementOp {
    Add,
    Neg,
    Mul,
    /// Multiplication by the image of an integer in `Z/n`.
    Scalar(i64),
}

/// A finite commutative unital `Z/n`-algebra. Immutable once built.
#[derive(Debug, Clone)]
pub struct FiniteRing {
    id: RingId,
    modulus: u64,
    divisors: Vec<u64>,
    // flat products: table[(i * m + j) * m + k] = c_ijk
    table: Vec<u64>,
    identity: Vec<u64>,
    order: u64,
    label: Option<String>,
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for FiniteRing {}

impl FiniteRing {
    /// Build a ring from raw structure constants, checking that they define a
    /// commutative, associative, unital multiplication on `⊕ Z/d_i`.
    ///
    /// `table[i][j]` holds the coordinates of `e_i e_j`.
    pub fn from_structure(
        modulus: u64,
        divisors: Vec<u64>,
        table: &[Vec<Vec<u64>>],
        identity: Vec<u64>,
    ) -> Result<FiniteRing> {
        let m = divisors.len();
        if table.len() != m || table.iter().any(|row| row.len() != m) {
            return Err(Error::InvalidSpec(format!("structure table must be {m}x{m}")));
        }
        let mut flat = Vec::with_capacity(m * m * m);
        for row in table {
            for entry in row {
                if entry.len() != m {
                    return Err(Error::InvalidSpec(format!(
                        "structure table entries must have {m} coordinates"
                    )));
                }
                flat.extend_from_slice(entry);
            }
        }
        Self::from_flat(modulus, divisors, flat, identity)
    }

    pub(crate) fn from_flat(
        modulus: u64,
        divisors: Vec<u64>,
        table: Vec<u64>,
        identity: Vec<u64>,
    ) -> Result<FiniteRing> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        let m = divisors.len();
        if m == 0 {
            return Err(Error::InvalidSpec("ring must have rank at least 1".into()));
        }
        for &d in &divisors {
            if d == 0 {
                return Err(Error::ZeroModulus);
            }
            if !modulus.is_multiple_of(d) {
                return Err(Error::NotDivisible(d, modulus));
            }
        }
        if identity.len() != m || identity.iter().zip(&divisors).any(|(&a, &d)| a >= d) {
            return Err(Error::BadCoordinates(identity));
        }
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let c = table[(i * m + j) * m + k];
                    if c >= divisors[k] {
                        return Err(Error::InvalidSpec(format!(
                            "structure constant c[{i}][{j}][{k}] = {c} not reduced mod {}",
                            divisors[k]
                        )));
                    }
                    // d_i e_i = 0 forces d_i (e_i e_j) = 0
                    let killer = gcd(divisors[i], divisors[j]);
                    if mul_mod(killer, c, divisors[k]) != 0 {
                        return Err(Error::StructureCheck("well-definedness", vec![i, j, k]));
                    }
                }
            }
        }
        let mut order: u64 = 1;
        for &d in &divisors {
            order = order
                .checked_mul(d)
                .ok_or_else(|| Error::InvalidSpec("ring order overflows u64".into()))?;
        }

        let mut hasher = Sha256::new();
        for part in [&divisors, &table, &identity] {
            hasher.update((part.len() as u64).to_le_bytes());
            for v in part.iter() {
                hasher.update(v.to_le_bytes());
            }
        }
        let digest = hasher.finalize();
        let structure = u64::from_le_bytes(digest[..8].try_into().unwrap());

        let ring = FiniteRing {
            id: RingId { structure, modulus },
            modulus,
            divisors,
            table,
            identity,
            order,
            label: None,
        };
        ring.check_axioms()?;
        Ok(ring)
    }

    fn check_axioms(&self) -> Result<()> {
        let m = self.rank();
        let basis: Vec<Vec<u64>> = (0..m).map(|i| self.basis_coords(i)).collect();
        for i in 0..m {
            if self.mul_coords(&self.identity, &basis[i]) != basis[i] {
                return Err(Error::StructureCheck("identity", vec![i]));
            }
            for j in 0..m {
                let ij = self.product(i, j);
                if ij != self.product(j, i) {
                    return Err(Error::StructureCheck("commutativity", vec![i, j]));
                }
                for k in 0..m {
                    let left = self.mul_coords(ij, &basis[k]);
                    let right = self.mul_coords(&basis[i], self.product(j, k));
                    if left != right {
                        return Err(Error::StructureCheck("associativity", vec![i, j, k]));
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn set_label(&mut self, label: String) {
        self.label = Some(label);
    }

    pub fn id(&self) -> RingId {
        self.id
    }

    /// Short identifier used in reports: the spec hash when the ring was built
    /// from a spec, otherwise the structural id.
    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.id.to_string())
    }

    /// The declared scalar modulus `n`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    /// Elementary divisors `d_1..d_m` of the additive group.
    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Number of elements as a `usize`, for index-based operations.
    pub fn size(&self) -> usize {
        usize::try_from(self.order).expect("ring too large to index")
    }

    /// Additive order of the identity.
    pub fn characteristic(&self) -> u64 {
        self.identity
            .iter()
            .zip(&self.divisors)
            .fold(1, |acc, (&a, &d)| lcm(acc, d / gcd(a, d)))
    }

    /// Coordinates of `e_i e_j`.
    pub(crate) fn product(&self, i: usize, j: usize) -> &[u64] {
        let m = self.rank();
        let start = (i * m + j) * m;
        &self.table[start..start + m]
    }

    fn basis_coords(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0; self.rank()];
        v[i] = 1 % self.divisors[i];
        v
    }

    /// The same ring regarded as a `Z/m`-algebra. Requires `char | m`.
    pub fn with_scalar_modulus(&self, modulus: u64) -> Result<FiniteRing> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        // each d_i must divide the new modulus for the coordinate group to be a Z/m-module
        for &d in &self.divisors {
            if !modulus.is_multiple_of(d) {
                return Err(Error::NotDivisible(d, modulus));
            }
        }
        let mut ring = self.clone();
        ring.modulus = modulus;
        ring.id = self.id.with_modulus(modulus);
        ring.label = None;
        Ok(ring)
    }

    /// Direct product of rings, regarded over `Z/declared_n`. Coordinates are
    /// concatenated in factor order.
    pub fn product_of(factors: &[&FiniteRing], declared_n: u64) -> Result<FiniteRing> {
        if factors.is_empty() {
            return Err(Error::InvalidSpec("product needs at least one factor".into()));
        }
        for f in factors {
            let c = f.characteristic();
            if declared_n == 0 || !declared_n.is_multiple_of(c) {
                return Err(Error::NotDivisible(c, declared_n));
            }
        }
        let divisors: Vec<u64> = factors.iter().flat_map(|f| f.divisors.clone()).collect();
        let identity: Vec<u64> = factors.iter().flat_map(|f| f.identity.clone()).collect();
        let m = divisors.len();
        let mut table = vec![0u64; m * m * m];
        let mut offset = 0;
        for f in factors {
            let fm = f.rank();
            for i in 0..fm {
                for j in 0..fm {
                    for (k, &c) in f.product(i, j).iter().enumerate() {
                        table[((offset + i) * m + offset + j) * m + offset + k] = c;
                    }
                }
            }
            offset += fm;
        }
        Self::from_flat(declared_n, divisors, table, identity)
    }

    fn check(&self, e: &RingElement) -> Result<()> {
        if e.ring != self.id {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    /// Wrap coordinates as an element, rejecting unreduced or mis-sized input.
    pub fn element(&self, coords: Vec<u64>) -> Result<RingElement> {
        if coords.len() != self.rank() || coords.iter().zip(&self.divisors).any(|(&a, &d)| a >= d) {
            return Err(Error::BadCoordinates(coords));
        }
        Ok(RingElement { ring: self.id, coords })
    }

    /// Reduce arbitrary integer coordinates into an element.
    pub fn element_reduced(&self, coords: &[i64]) -> Result<RingElement> {
        if coords.len() != self.rank() {
            return Err(Error::BadCoordinates(coords.iter().map(|&c| c as u64).collect()));
        }
        let coords = coords
            .iter()
            .zip(&self.divisors)
            .map(|(&a, &d)| reduce_signed(a, d))
            .collect();
        Ok(RingElement { ring: self.id, coords })
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            ring: self.id,
            coords: vec![0; self.rank()],
        }
    }

    pub fn one(&self) -> RingElement {
        RingElement {
            ring: self.id,
            coords: self.identity.clone(),
        }
    }

    pub fn basis(&self, i: usize) -> RingElement {
        RingElement {
            ring: self.id,
            coords: self.basis_coords(i),
        }
    }

    /// The element at position `index` of the mixed-radix enumeration.
    pub fn element_at(&self, index: usize) -> Result<RingElement> {
        if index as u64 >= self.order {
            return Err(Error::IndexOutOfRange(index, self.order as usize));
        }
        Ok(RingElement {
            ring: self.id,
            coords: self.coords_at(index),
        })
    }

    pub(crate) fn coords_at(&self, mut index: usize) -> Vec<u64> {
        self.divisors
            .iter()
            .map(|&d| {
                let c = index as u64 % d;
                index = (index as u64 / d) as usize;
                c
            })
            .collect()
    }

    pub(crate) fn index_of_coords(&self, coords: &[u64]) -> usize {
        let mut index = 0u64;
        for (&c, &d) in coords.iter().zip(&self.divisors).rev() {
            index = index * d + c;
        }
        index as usize
    }

    pub fn index_of(&self, e: &RingElement) -> Result<usize> {
        self.check(e)?;
        Ok(self.index_of_coords(&e.coords))
    }

    /// All elements in mixed-radix order; index 0 is zero.
    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.size()).map(move |i| RingElement {
            ring: self.id,
            coords: self.coords_at(i),
        })
    }

    pub(crate) fn add_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.divisors)
            .map(|((&x, &y), &d)| ((x as u128 + y as u128) % d as u128) as u64)
            .collect()
    }

    pub(crate) fn neg_coords(&self, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.divisors).map(|(&x, &d)| (d - x) % d).collect()
    }

    pub(crate) fn scale_coords(&self, a: &[u64], k: i64) -> Vec<u64> {
        let k = reduce_signed(k, self.modulus);
        a.iter()
            .zip(&self.divisors)
            .map(|(&x, &d)| mul_mod(x, k % d, d))
            .collect()
    }

    pub(crate) fn mul_coords(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.rank();
        let mut acc = vec![0u64; m];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let xy = x as u128 * y as u128;
                for (k, &c) in self.product(i, j).iter().enumerate() {
                    if c != 0 {
                        let d = self.divisors[k] as u128;
                        acc[k] = ((acc[k] as u128 + (xy % d) * c as u128) % d) as u64;
                    }
                }
            }
        }
        acc
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(RingElement {
            ring: self.id,
            coords: self.add_coords(&a.coords, &b.coords),
        })
    }

    pub fn neg(&self, a: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        Ok(RingElement {
            ring: self.id,
            coords: self.neg_coords(&a.coords),
        })
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(RingElement {
            ring: self.id,
            coords: self.mul_coords(&a.coords, &b.coords),
        })
    }

    /// Multiply by the image of `k` in `Z/n`.
    pub fn scalar(&self, k: i64, a: &RingElement) -> Result<RingElement> {
        self.check(a)?;
        Ok(RingElement {
            ring: self.id,
            coords: self.scale_coords(&a.coords, k),
        })
    }

    pub fn pow(&self, a: &RingElement, mut exp: u64) -> Result<RingElement> {
        self.check(a)?;
        let mut acc = self.identity.clone();
        let mut base = a.coords.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_coords(&acc, &base);
            }
            base = self.mul_coords(&base, &base);
            exp >>= 1;
        }
        Ok(RingElement {
            ring: self.id,
            coords: acc,
        })
    }

    /// Dispatch form of the element operations; `b` is ignored by unary ops.
    pub fn apply(&self, op: ElementOp, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        // binary ops and unary ops alike require both operands to live here
        self.check(b)?;
        match op {
            ElementOp::Add => self.add(a, b),
            ElementOp::Neg => self.neg(a),
            ElementOp::Mul => self.mul(a, b),
            ElementOp::Scalar(k) => self.scalar(k, a),
        }
    }

    /// The principal ideal `{r t : t ∈ R}`, sorted by element index.
    pub fn principal_ideal(&self, r: &RingElement) -> Result<Vec<RingElement>> {
        Ok(self
            .principal_ideal_indices(r)?
            .into_iter()
            .map(|i| RingElement {
                ring: self.id,
                coords: self.coords_at(i),
            })
            .collect())
    }

    pub fn principal_ideal_indices(&self, r: &RingElement) -> Result<Vec<usize>> {
        self.check(r)?;
        let mut seen = vec![false; self.size()];
        for i in 0..self.size() {
            let t = self.coords_at(i);
            seen[self.index_of_coords(&self.mul_coords(&r.coords, &t))] = true;
        }
        Ok(seen.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect())
    }

    /// Whether `r` has a multiplicative inverse, found by powering: `r` is a
    /// unit iff some power `r^k` with `1 ≤ k ≤ |R|` equals one.
    pub fn multiplicative_order(&self, r: &RingElement) -> Result<Option<u64>> {
        self.check(r)?;
        let mut acc = r.coords.clone();
        for k in 1..=self.order {
            if acc == self.identity {
                return Ok(Some(k));
            }
            acc = self.mul_coords(&acc, &r.coords);
        }
        Ok(None)
    }
}
