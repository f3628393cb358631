//! Unit groups, multiplicative characters and Paley graphs `P_χ = Γ(R, ker χ)`.
//!
//! Characters are stored as explicit value tables on the unit group: the
//! value at a unit `u` is an exponent `k` standing for `ζ_ord^k`.

use std::collections::HashMap;

use crate::arith::{is_prime, units_mod};
use crate::error::{Error, Result};
use crate::ring::{FiniteRing, RingElement, RingId};
use crate::spec::RingSpec;
use crate::spectra::CayleyGraph;

/// Largest ring accepted by [`unit_group`].
pub const UNIT_GROUP_CAP: usize = 4096;
/// Multiplicativity is checked on every pair of units up to this many units.
pub const MULTIPLICATIVITY_CHECK_CAP: usize = 512;

#[derive(Debug, Clone)]
pub struct UnitGroup {
    ring: RingId,
    units: Vec<usize>,
    orders: Vec<u64>,
    generators: Vec<(usize, u64)>,
}

impl UnitGroup {
    pub fn ring_id(&self) -> RingId {
        self.ring
    }

    /// Element indices of the units, ascending.
    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Multiplicative order of each unit, aligned with [`UnitGroup::units`].
    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    /// A generating set as (element index, order) pairs.
    pub fn generators(&self) -> &[(usize, u64)] {
        &self.generators
    }

    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1, |acc, &o| crate::arith::lcm(acc, o))
    }
}

pub fn unit_group(ring: &FiniteRing) -> Result<UnitGroup> {
    let size = ring.size();
    if size > UNIT_GROUP_CAP {
        return Err(Error::SizeCap {
            what: "ring order",
            size,
            cap: UNIT_GROUP_CAP,
        });
    }
    let mut units = Vec::new();
    let mut orders = Vec::new();
    for e in ring.elements() {
        if let Some(ord) = ring.multiplicative_order(&e)? {
            units.push(ring.index_of(&e)?);
            orders.push(ord);
        }
    }
    // greedy: keep adding the highest-order unit outside the current subgroup
    let mut in_subgroup = vec![false; size];
    in_subgroup[ring.index_of(&ring.one())?] = true;
    let mut subgroup = vec![ring.one().coords().to_vec()];
    let mut generators = Vec::new();
    let mut by_order: Vec<(u64, usize)> = orders.iter().copied().zip(units.iter().copied()).collect();
    by_order.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    for (ord, u) in by_order {
        if in_subgroup[u] {
            continue;
        }
        generators.push((u, ord));
        let g = ring.coords_at(u);
        let mut frontier = subgroup.clone();
        // close under multiplication by g
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in frontier {
                let p = ring.mul_coords(&h, &g);
                let idx = ring.index_of_coords(&p);
                if !in_subgroup[idx] {
                    in_subgroup[idx] = true;
                    subgroup.push(p.clone());
                    next.push(p);
                }
            }
            frontier = next;
        }
    }
    Ok(UnitGroup {
        ring: ring.id(),
        units,
        orders,
        generators,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicativeCharacter {
    ring: RingId,
    order: u64,
    // unit index -> exponent k, meaning ζ_order^k
    values: HashMap<usize, u64>,
}

impl MultiplicativeCharacter {
    /// Build from an explicit table, checking `χ(1) = 1` and, for up to
    /// [`MULTIPLICATIVITY_CHECK_CAP`] units, `χ(ab) = χ(a) χ(b)`.
    pub fn from_table(ring: &FiniteRing, order: u64, values: HashMap<usize, u64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Character("character order must be positive".into()));
        }
        let units = unit_group(ring)?;
        if values.len() != units.len() || units.units().iter().any(|u| !values.contains_key(u)) {
            return Err(Error::Character("value table must cover exactly the units".into()));
        }
        if values.values().any(|&k| k >= order) {
            return Err(Error::Character("values must be reduced mod the order".into()));
        }
        let one = ring.index_of(&ring.one())?;
        if values[&one] != 0 {
            return Err(Error::Character("χ(1) must be 1".into()));
        }
        if units.len() <= MULTIPLICATIVITY_CHECK_CAP {
            for &a in units.units() {
                let ca = ring.coords_at(a);
                for &b in units.units() {
                    let ab = ring.index_of_coords(&ring.mul_coords(&ca, &ring.coords_at(b)));
                    if values[&ab] != (values[&a] + values[&b]) % order {
                        return Err(Error::Character(format!("not multiplicative at units {a}, {b}")));
                    }
                }
            }
        }
        Ok(MultiplicativeCharacter {
            ring: ring.id(),
            order,
            values,
        })
    }

    pub fn trivial(ring: &FiniteRing) -> Result<Self> {
        let units = unit_group(ring)?;
        let values = units.units().iter().map(|&u| (u, 0)).collect();
        Self::from_table(ring, 1, values)
    }

    pub fn ring_id(&self) -> RingId {
        self.ring
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `χ(u)` as an exponent of `ζ_order`; `None` if `u` is not a unit.
    pub fn value(&self, unit_index: usize) -> Option<u64> {
        self.values.get(&unit_index).copied()
    }

    pub fn eval(&self, ring: &FiniteRing, u: &RingElement) -> Result<Option<u64>> {
        if ring.id() != self.ring {
            return Err(Error::RingMismatch);
        }
        Ok(self.value(ring.index_of(u)?))
    }

    /// Whether `χ(-1) = 1`.
    pub fn is_even(&self, ring: &FiniteRing) -> Result<bool> {
        let minus_one = ring.neg(&ring.one())?;
        Ok(self.eval(ring, &minus_one)? == Some(0))
    }
}

fn require_field(ring: &FiniteRing, units: &UnitGroup) -> Result<()> {
    if units.len() as u64 + 1 != ring.order() {
        return Err(Error::Character("ring is not a field".into()));
    }
    Ok(())
}

/// The order-`k` power residue character on a finite field `F_N` with
/// `k | N - 1`, determined by a chosen primitive `k`-th root of unity `root`:
/// `χ(a) = j` where `a^((N-1)/k) = root^j`.
pub fn power_residue_character(ring: &FiniteRing, k: u64, root: &RingElement) -> Result<MultiplicativeCharacter> {
    let units = unit_group(ring)?;
    require_field(ring, &units)?;
    let big_n = ring.order();
    if k == 0 || !(big_n - 1).is_multiple_of(k) {
        return Err(Error::Character(format!("{k} does not divide N - 1 = {}", big_n - 1)));
    }
    // powers root^j for j < k must be distinct: root has order exactly k
    if ring.multiplicative_order(root)? != Some(k) {
        return Err(Error::Character(format!("root does not have order {k}")));
    }
    let mut table: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut acc = ring.one();
    for j in 0..k {
        table.insert(acc.coords().to_vec(), j);
        acc = ring.mul(&acc, root)?;
    }
    let exp = (big_n - 1) / k;
    let mut values = HashMap::new();
    for &u in units.units() {
        let p = ring.pow(&ring.element_at(u)?, exp)?;
        // in a field, a^((N-1)/k) is always a k-th root of unity
        let j = *table
            .get(p.coords())
            .expect("power residue lies among the k-th roots of unity");
        values.insert(u, j);
    }
    MultiplicativeCharacter::from_table(ring, k, values)
}

/// The quadratic character of a finite field of odd order (the Legendre
/// symbol on `Z/p`), valued in `{1, -1}` as exponents `{0, 1}` of `ζ_2`.
pub fn quadratic_character(ring: &FiniteRing) -> Result<MultiplicativeCharacter> {
    if ring.order().is_multiple_of(2) {
        return Err(Error::Character("quadratic character needs odd order".into()));
    }
    let minus_one = ring.neg(&ring.one())?;
    power_residue_character(ring, 2, &minus_one)
}

/// The quartic residue symbol on `Z[i]/p` for a rational prime `p ≡ 3 (mod 4)`,
/// where `Z[i]/p = F_{p^2}`: `χ(a) = i^k` with `a^((p^2-1)/4) ≡ i^k`.
///
/// Returns the ring and the character; `spec` must be `monogenic` with
/// `g = x^2 + 1`.
pub fn quartic_residue_character(spec: &RingSpec) -> Result<(FiniteRing, MultiplicativeCharacter)> {
    let p = match spec {
        RingSpec::Monogenic { n, g } if g.as_slice() == [1, 0, 1] => *n,
        _ => return Err(Error::Character("quartic symbol needs Z[x]/(x^2 + 1, p)".into())),
    };
    if !is_prime(p) || p % 4 != 3 {
        return Err(Error::Character(format!(
            "{p} is not a rational prime congruent to 3 mod 4"
        )));
    }
    let ring = spec.build()?;
    let i = ring.basis(1);
    let chi = power_residue_character(&ring, 4, &i)?;
    Ok((ring, chi))
}

/// `ker χ` as sorted element indices.
pub fn character_kernel(chi: &MultiplicativeCharacter) -> Vec<usize> {
    let mut kernel: Vec<usize> = chi.values.iter().filter(|(_, &k)| k == 0).map(|(&u, _)| u).collect();
    kernel.sort_unstable();
    kernel
}

/// `Γ(R, ker χ)`; requires `χ(-1) = 1` so that the kernel is symmetric.
pub fn paley_graph(ring: &FiniteRing, chi: &MultiplicativeCharacter) -> Result<CayleyGraph> {
    if chi.ring != ring.id() {
        return Err(Error::RingMismatch);
    }
    if !chi.is_even(ring)? {
        return Err(Error::Character(
            "χ(-1) ≠ 1, so ker χ is not closed under negation".into(),
        ));
    }
    CayleyGraph::new(ring, character_kernel(chi))
}

/// Whether `χ(a · 1_R) = 1` for every unit `a` of `Z/n`.
pub fn induced_dirichlet_is_trivial(ring: &FiniteRing, chi: &MultiplicativeCharacter, n: u64) -> Result<bool> {
    if chi.ring != ring.id() {
        return Err(Error::RingMismatch);
    }
    // (Z/1)^× is the trivial group, represented by 1
    let reps = if n == 1 { vec![1] } else { units_mod(n) };
    for a in reps {
        let image = ring.scalar(a as i64, &ring.one())?;
        match chi.eval(ring, &image)? {
            Some(0) => {}
            Some(_) => return Ok(false),
            None => return Err(Error::Character(format!("{a}·1 is not a unit of the ring"))),
        }
    }
    Ok(true)
}
