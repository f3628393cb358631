//! Connection-set selectors: `1,7`, `units`, `gcd:d[,d..]`, `orbit:i`, `empty`.

use std::collections::BTreeSet;

use integral_cayley::arith::gcd;
use integral_cayley::{scalar_orbits, unit_group, FiniteRing};

pub fn parse_list(text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|e| format!("bad index {t:?}: {e}")))
        .collect()
}

pub fn parse_values(text: &str) -> Result<Vec<u64>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|e| format!("bad value {t:?}: {e}")))
        .collect()
}

/// Resolve a selector to sorted element indices. Validity (`0 ∉ S`,
/// `S = -S`) is left to graph construction.
pub fn resolve(ring: &FiniteRing, selector: &str) -> Result<Vec<usize>, String> {
    let selector = selector.trim();
    let set: BTreeSet<usize> = if selector == "empty" {
        BTreeSet::new()
    } else if selector == "units" {
        unit_group(ring)
            .map_err(|e| e.to_string())?
            .units()
            .iter()
            .copied()
            .collect()
    } else if let Some(rest) = selector.strip_prefix("gcd:") {
        let n = ring.modulus();
        let ds = parse_values(rest)?;
        if let Some(d) = ds.iter().find(|&&d| d == 0 || !n.is_multiple_of(d)) {
            return Err(format!("{d} is not a divisor of {n}"));
        }
        let mut out = BTreeSet::new();
        for m in 0..n {
            if ds.contains(&gcd(m, n)) {
                let e = ring.scalar(m as i64, &ring.one()).map_err(|e| e.to_string())?;
                out.insert(ring.index_of(&e).map_err(|e| e.to_string())?);
            }
        }
        out
    } else if let Some(rest) = selector.strip_prefix("orbit:") {
        let i: usize = rest
            .trim()
            .parse()
            .map_err(|e| format!("bad orbit index {rest:?}: {e}"))?;
        if i >= ring.size() {
            return Err(format!("element index {i} out of range (ring order {})", ring.size()));
        }
        let orbits = scalar_orbits(ring);
        orbits.orbits()[orbits.orbit_of(i)].iter().copied().collect()
    } else {
        parse_list(selector)?.into_iter().collect()
    };
    Ok(set.into_iter().collect())
}
