//! Declarative ring descriptions and the builders that turn them into
//! [`FiniteRing`]s.
//!
//! The JSON form is tagged by `kind`; polynomial coefficients run from the
//! constant term upward:
//!
//! ```json
//! {"kind":"monogenic","n":3,"g":[1,0,1]}
//! ```

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{inv_mod, is_prime, mul_mod};
use crate::error::{Error, Result};
use crate::fp_poly;
use crate::ring::FiniteRing;

/// A coefficient of a polynomial over `F_q = F_p[y]/(h)`: either an element
/// of the prime field or a coordinate vector in powers of `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FqCoeff {
    Prime(u64),
    Vector(Vec<u64>),
}

fn default_base_poly() -> Vec<u64> {
    vec![0, 1]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingSpec {
    /// `Z/n`.
    Zn { n: u64 },
    /// `Z/n[C_{m_1} × … × C_{m_k}]`.
    GroupAlgebra { n: u64, factors: Vec<u64> },
    /// `F_q[t]/(f)` with `F_q = F_p[y]/(h)`; `h` defaults to `y`, i.e. `F_q = F_p`.
    PolyQuotient {
        p: u64,
        #[serde(default = "default_base_poly")]
        base_poly: Vec<u64>,
        modulus: Vec<FqCoeff>,
    },
    /// `Z[x]/(g, n)` for monic `g`.
    #[serde(rename = "monogenic")]
    Monogenic { n: u64, g: Vec<i64> },
    /// Direct product regarded over `Z/declared_n`.
    Product { specs: Vec<RingSpec>, declared_n: u64 },
    /// Raw structure constants: `table[i][j]` is the coordinate vector of `e_i e_j`.
    Structure {
        n: u64,
        divisors: Vec<u64>,
        table: Vec<Vec<Vec<u64>>>,
        identity: Vec<u64>,
    },
}

impl RingSpec {
    /// `F_p[x_1..x_k]/(x_i x_j)`: the local ring with square-zero maximal
    /// ideal of dimension `k`. For `k ≥ 2` it is not symmetric.
    pub fn square_zero(p: u64, k: usize) -> RingSpec {
        let m = k + 1;
        let mut table = vec![vec![vec![0u64; m]; m]; m];
        // 1 * e_i = e_i; x_i x_j = 0
        for (i, row) in table.iter_mut().enumerate() {
            row[0][i] = 1 % p;
        }
        for (i, product) in table[0].iter_mut().enumerate() {
            product[i] = 1 % p;
        }
        let mut identity = vec![0; m];
        identity[0] = 1 % p;
        RingSpec::Structure {
            n: p,
            divisors: vec![p; m],
            table,
            identity,
        }
    }

    /// `Z[i]/n`, i.e. `Z[x]/(x^2 + 1, n)`.
    pub fn gaussian(n: u64) -> RingSpec {
        RingSpec::Monogenic { n, g: vec![1, 0, 1] }
    }

    /// `F_p[t]/t^a`.
    pub fn truncated(p: u64, a: usize) -> RingSpec {
        let mut modulus = vec![FqCoeff::Prime(0); a];
        modulus.push(FqCoeff::Prime(1));
        RingSpec::PolyQuotient {
            p,
            base_poly: default_base_poly(),
            modulus,
        }
    }

    /// Stable short hash of the spec's JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("spec serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn build(&self) -> Result<FiniteRing> {
        let mut ring = self.build_unlabelled()?;
        ring.set_label(self.hash());
        Ok(ring)
    }

    fn build_unlabelled(&self) -> Result<FiniteRing> {
        match self {
            RingSpec::Zn { n } => build_zn(*n),
            RingSpec::GroupAlgebra { n, factors } => build_group_algebra(*n, factors),
            RingSpec::PolyQuotient { p, base_poly, modulus } => {
                PolyQuotientLayout::new(*p, base_poly, modulus)?.build()
            }
            RingSpec::Monogenic { n, g } => build_monogenic(*n, g),
            RingSpec::Product { specs, declared_n } => {
                let rings = specs.iter().map(|s| s.build()).collect::<Result<Vec<_>>>()?;
                let refs: Vec<&FiniteRing> = rings.iter().collect();
                FiniteRing::product_of(&refs, *declared_n)
            }
            RingSpec::Structure {
                n,
                divisors,
                table,
                identity,
            } => FiniteRing::from_structure(*n, divisors.clone(), table, identity.clone()),
        }
    }
}

fn build_zn(n: u64) -> Result<FiniteRing> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    FiniteRing::from_flat(n, vec![n], vec![1 % n], vec![1 % n])
}

fn build_group_algebra(n: u64, factors: &[u64]) -> Result<FiniteRing> {
    if n == 0 || factors.contains(&0) {
        return Err(Error::ZeroModulus);
    }
    let size: usize = factors.iter().map(|&m| m as usize).product();
    let decode = |mut g: usize| -> Vec<usize> {
        factors
            .iter()
            .map(|&m| {
                let c = g % m as usize;
                g /= m as usize;
                c
            })
            .collect()
    };
    let encode = |v: &[usize]| -> usize {
        v.iter()
            .zip(factors)
            .rev()
            .fold(0, |acc, (&c, &m)| acc * m as usize + c)
    };
    let mut table = vec![0u64; size * size * size];
    for g in 0..size {
        let gv = decode(g);
        for h in 0..size {
            let hv = decode(h);
            let sum: Vec<usize> = gv
                .iter()
                .zip(&hv)
                .zip(factors)
                .map(|((&a, &b), &m)| (a + b) % m as usize)
                .collect();
            table[(g * size + h) * size + encode(&sum)] = 1 % n;
        }
    }
    let mut identity = vec![0; size];
    identity[0] = 1 % n;
    FiniteRing::from_flat(n, vec![n; size], table, identity)
}

fn build_monogenic(n: u64, g: &[i64]) -> Result<FiniteRing> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if g.last() != Some(&1) {
        return Err(Error::NotMonic(g.to_vec()));
    }
    let m = g.len() - 1;
    if m == 0 {
        return Err(Error::InvalidSpec(
            "monogenic modulus must have degree at least 1".into(),
        ));
    }
    let low: Vec<u64> = g[..m].iter().map(|&c| crate::arith::reduce_signed(c, n)).collect();
    // powers[k] = x^k reduced mod (g, n), for k < 2m - 1
    let mut powers: Vec<Vec<u64>> = Vec::with_capacity(2 * m);
    for k in 0..(2 * m - 1) {
        let v = if k < m {
            let mut v = vec![0; m];
            v[k] = 1 % n;
            v
        } else {
            // x^k = x * x^(k-1); shift and replace x^m by -(g_0 + … + g_{m-1} x^{m-1})
            let prev = &powers[k - 1];
            let top = prev[m - 1];
            let mut v = vec![0; m];
            v[1..m].copy_from_slice(&prev[..m - 1]);
            for (i, &c) in low.iter().enumerate() {
                v[i] = (v[i] + n - mul_mod(top, c, n)) % n;
            }
            v
        };
        powers.push(v);
    }
    let mut table = Vec::with_capacity(m * m * m);
    for i in 0..m {
        for j in 0..m {
            table.extend_from_slice(&powers[i + j]);
        }
    }
    let mut identity = vec![0; m];
    identity[0] = 1 % n;
    FiniteRing::from_flat(n, vec![n; m], table, identity)
}

/// `F_q[t]/(f)` laid out over F_p with basis `y^a t^b` at index `a + e*b`,
/// where `e = deg h`.
pub(crate) struct PolyQuotientLayout {
    p: u64,
    // monic irreducible h over F_p
    h: Vec<u64>,
    // monic f over F_q; each coefficient has exactly e F_p-coordinates
    f: Vec<Vec<u64>>,
}

impl PolyQuotientLayout {
    pub(crate) fn new(p: u64, base_poly: &[u64], modulus: &[FqCoeff]) -> Result<Self> {
        if p == 0 {
            return Err(Error::ZeroModulus);
        }
        if !is_prime(p) {
            return Err(Error::InvalidSpec(format!("{p} is not prime")));
        }
        let h = fp_poly::trim(base_poly.iter().map(|&c| c % p).collect());
        let Some(e) = fp_poly::degree(&h) else {
            return Err(Error::ZeroModulus);
        };
        if e == 0 || !fp_poly::is_irreducible(&h, p) {
            return Err(Error::ReduciblePolynomial(base_poly.to_vec(), p));
        }
        let inv = inv_mod(h[e], p).unwrap();
        let h: Vec<u64> = h.iter().map(|&c| mul_mod(c, inv, p)).collect();

        let mut layout = PolyQuotientLayout { p, h, f: Vec::new() };
        let mut f: Vec<Vec<u64>> = modulus
            .iter()
            .map(|c| match c {
                FqCoeff::Prime(a) => layout.fq_reduce(&[*a % p]),
                FqCoeff::Vector(v) => layout.fq_reduce(&v.iter().map(|&a| a % p).collect::<Vec<_>>()),
            })
            .collect();
        while f.last().is_some_and(|c| c.iter().all(|&x| x == 0)) {
            f.pop();
        }
        if f.is_empty() {
            return Err(Error::ZeroModulus);
        }
        if f.len() == 1 {
            return Err(Error::InvalidSpec("modulus must have positive degree in t".into()));
        }
        let lead_inv = layout.fq_inv(f.last().unwrap());
        for c in f.iter_mut() {
            *c = layout.fq_mul(c, &lead_inv);
        }
        layout.f = f;
        Ok(layout)
    }

    fn e(&self) -> usize {
        self.h.len() - 1
    }

    fn k(&self) -> usize {
        self.f.len() - 1
    }

    fn fq_reduce(&self, a: &[u64]) -> Vec<u64> {
        let mut r = fp_poly::rem(a, &self.h, self.p);
        r.resize(self.e(), 0);
        r
    }

    fn fq_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        self.fq_reduce(&fp_poly::mul(a, b, self.p))
    }

    fn fq_inv(&self, a: &[u64]) -> Vec<u64> {
        // a^(q-2) in F_q
        let q = (self.p as u128).pow(self.e() as u32);
        let mut r = fp_poly::pow_mod_poly(a, q - 2, &self.h, self.p);
        r.resize(self.e(), 0);
        r
    }

    /// Product of two elements given as `k` F_q-coefficients each.
    fn mul(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let (e, k, p) = (self.e(), self.k(), self.p);
        let mut prod = vec![vec![0u64; e]; 2 * k - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let xy = self.fq_mul(x, y);
                for (c, v) in prod[i + j].iter_mut().zip(&xy) {
                    *c = (*c + v) % p;
                }
            }
        }
        // reduce by the monic f from the top degree down
        for deg in (k..2 * k - 1).rev() {
            let top = prod[deg].clone();
            if top.iter().all(|&x| x == 0) {
                continue;
            }
            for (i, fc) in self.f[..k].iter().enumerate() {
                let t = self.fq_mul(&top, fc);
                for (c, v) in prod[deg - k + i].iter_mut().zip(&t) {
                    *c = (*c + p - v) % p;
                }
            }
            prod[deg] = vec![0; e];
        }
        prod.truncate(k);
        prod
    }

    fn basis(&self, index: usize) -> Vec<Vec<u64>> {
        let (e, k) = (self.e(), self.k());
        let mut v = vec![vec![0u64; e]; k];
        v[index / e][index % e] = 1;
        v
    }

    pub(crate) fn build(&self) -> Result<FiniteRing> {
        let (e, k, p) = (self.e(), self.k(), self.p);
        let m = e * k;
        let mut table = Vec::with_capacity(m * m * m);
        for i in 0..m {
            for j in 0..m {
                let prod = self.mul(&self.basis(i), &self.basis(j));
                table.extend(prod.into_iter().flatten());
            }
        }
        let mut identity = vec![0; m];
        identity[0] = 1;
        FiniteRing::from_flat(p, vec![p; m], table, identity)
    }
}
