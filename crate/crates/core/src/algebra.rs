//! Exact integer linear algebra: Smith Normal Form with unimodular
//! transforms, finitely generated abelian groups in canonical form, and
//! homology extraction from chain complexes.
//!
//! Everything here runs over arbitrary-precision integers; no floating
//! point is involved anywhere.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Errors from chain-complex and coefficient-group operations.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AlgebraError {
    /// The supplied boundary matrices do not compose to zero.
    ChainCompositionNonzero,
    /// Matrix dimensions do not match the chain-complex shape.
    DimensionMismatch { expected: usize, found: usize },
    /// A coefficient group was not in canonical (divisor-chain) form.
    NonCanonicalGroup(String),
    /// Unparseable group specification.
    BadGroupSpec(String),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::ChainCompositionNonzero => {
                write!(f, "boundary matrices do not satisfy d1 * d2 = 0")
            }
            AlgebraError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            AlgebraError::NonCanonicalGroup(s) => {
                write!(f, "group not in canonical divisor-chain form: {s}")
            }
            AlgebraError::BadGroupSpec(s) => write!(f, "bad group spec: {s}"),
        }
    }
}

impl std::error::Error for AlgebraError {}

/// Dense exact-integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged row in matrix literal");
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    fn add_row(&mut self, target: usize, source: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(target, j) + factor * self.get(source, j);
            self.set(target, j, v);
        }
    }

    /// col[target] += factor * col[source]
    fn add_col(&mut self, target: usize, source: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, target) + factor * self.get(i, source);
            self.set(i, target, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j);
                    m.set(i, j, &num / &prev);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1).clone()
    }
}

/// Smith Normal Form `U * A * V = S` with `S` diagonal, entries positive
/// and each dividing the next; `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct SnfResult {
    /// The nonzero diagonal d1 | d2 | ... | dk.
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub s: IntMatrix,
}

/// Computes the Smith Normal Form by smallest-pivot gcd elimination.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());
    let n = a.rows().min(a.cols());

    for k in 0..n {
        'pivot: loop {
            // Smallest nonzero magnitude in the trailing submatrix.
            let mut best: Option<(usize, usize)> = None;
            for i in k..s.rows() {
                for j in k..s.cols() {
                    if !s.get(i, j).is_zero()
                        && best.is_none_or(|(bi, bj)| s.get(i, j).abs() < s.get(bi, bj).abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'pivot };
            s.swap_rows(k, pi);
            u.swap_rows(k, pi);
            s.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let mut clean = true;
            for i in k + 1..s.rows() {
                if !s.get(i, k).is_zero() {
                    let q = -(s.get(i, k) / s.get(k, k));
                    s.add_row(i, k, &q);
                    u.add_row(i, k, &q);
                    if !s.get(i, k).is_zero() {
                        clean = false;
                    }
                }
            }
            for j in k + 1..s.cols() {
                if !s.get(k, j).is_zero() {
                    let q = -(s.get(k, j) / s.get(k, k));
                    s.add_col(j, k, &q);
                    v.add_col(j, k, &q);
                    if !s.get(k, j).is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue 'pivot;
            }
            // Pull any entry the pivot does not divide into row k, then
            // rerun the gcd reduction.
            let mut fixed = true;
            'scan: for i in k + 1..s.rows() {
                for j in k + 1..s.cols() {
                    if !(s.get(i, j) % s.get(k, k)).is_zero() {
                        s.add_row(k, i, &BigInt::one());
                        u.add_row(k, i, &BigInt::one());
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                if s.get(k, k).is_negative() {
                    s.negate_row(k);
                    u.negate_row(k);
                }
                break 'pivot;
            }
        }
    }

    let mut diagonal = Vec::new();
    for k in 0..n {
        if s.get(k, k).is_zero() {
            break;
        }
        diagonal.push(s.get(k, k).clone());
    }
    let rank = diagonal.len();
    SnfResult {
        diagonal,
        rank,
        u,
        v,
        s,
    }
}

/// Rank of `a` over Z_m computed from the SNF diagonal.
///
/// For prime `m` this is the F_m matrix rank; composite moduli count the
/// diagonal entries not divisible by `m`.
pub fn mod_m_rank(a: &IntMatrix, m: u64) -> usize {
    assert!(m >= 2, "modulus must be at least 2");
    let m = BigInt::from(m);
    smith_normal_form(a)
        .diagonal
        .iter()
        .filter(|d| !(*d % &m).is_zero())
        .count()
}

/// Finitely generated abelian group `Z^r + Z_t1 + ... + Z_tk` with
/// `t1 | t2 | ... | tk` and every `ti > 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> AbelianGroup {
        AbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> AbelianGroup {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn integers() -> AbelianGroup {
        AbelianGroup::free(1)
    }

    pub fn cyclic(m: u64) -> AbelianGroup {
        assert!(m >= 2);
        AbelianGroup {
            free_rank: 0,
            torsion: vec![BigInt::from(m)],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Trivial group or a divisor chain of factors each exceeding 1.
    pub fn is_canonical(&self) -> bool {
        self.torsion.iter().all(|t| *t > BigInt::one())
            && self.torsion.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }

    /// Rebuilds the canonical divisor chain from an arbitrary list of
    /// cyclic orders via primary decomposition.
    pub fn canonicalize(&self) -> AbelianGroup {
        let mut primary: std::collections::BTreeMap<BigInt, Vec<u32>> =
            std::collections::BTreeMap::new();
        for t in &self.torsion {
            for (p, e) in factorize(t) {
                primary.entry(p).or_default().push(e);
            }
        }
        let slots = primary.values().map(Vec::len).max().unwrap_or(0);
        let mut chain = vec![BigInt::one(); slots];
        for (p, mut exps) in primary {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            // Largest exponent goes to the last (largest) invariant factor.
            for (slot, e) in exps.into_iter().enumerate() {
                let idx = slots - 1 - slot;
                chain[idx] = &chain[idx] * p.pow(e);
            }
        }
        chain.retain(|c| *c > BigInt::one());
        AbelianGroup {
            free_rank: self.free_rank,
            torsion: chain,
        }
    }

    /// Parses a spec like `Z`, `Z_2`, or `Z^2+Z_2+Z_4`.
    pub fn parse(spec: &str) -> Result<AbelianGroup, AlgebraError> {
        let mut free_rank = 0usize;
        let mut torsion = Vec::new();
        let cleaned: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(AlgebraError::BadGroupSpec("empty spec".into()));
        }
        if cleaned == "0" {
            return Ok(AbelianGroup::trivial());
        }
        for token in cleaned.split('+') {
            if token == "Z" {
                free_rank += 1;
            } else if let Some(r) = token.strip_prefix("Z^") {
                free_rank += r.parse::<usize>().map_err(|_| {
                    AlgebraError::BadGroupSpec(format!("bad free rank in `{token}`"))
                })?;
            } else if let Some(m) = token.strip_prefix("Z_") {
                let m: BigInt = m
                    .parse()
                    .map_err(|_| AlgebraError::BadGroupSpec(format!("bad modulus in `{token}`")))?;
                if m < BigInt::from(2) {
                    return Err(AlgebraError::BadGroupSpec(format!(
                        "modulus in `{token}` must be at least 2"
                    )));
                }
                torsion.push(m);
            } else {
                return Err(AlgebraError::BadGroupSpec(format!(
                    "unrecognized token `{token}`"
                )));
            }
        }
        let group = AbelianGroup { free_rank, torsion };
        if !group.is_canonical() {
            return Err(AlgebraError::NonCanonicalGroup(format!(
                "`{spec}` is not a divisor chain; write e.g. Z_2+Z_12 instead of Z_6+Z_4"
            )));
        }
        Ok(group)
    }

    /// Number of direct summands (used as the Betti number over Z_p).
    pub fn summand_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// JSON form `{ "free_rank": r, "torsion": [t1, t2, ...] }`; torsion
    /// factors too large for u64 are emitted as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let torsion: Vec<serde_json::Value> = self
            .torsion
            .iter()
            .map(|t| match u64::try_from(t) {
                Ok(n) => serde_json::json!(n),
                Err(_) => serde_json::json!(t.to_string()),
            })
            .collect();
        serde_json::json!({ "free_rank": self.free_rank, "torsion": torsion })
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z_{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            let mut e = 0u32;
            while (&n % &p).is_zero() {
                n = &n / &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Homology groups of a 2-dimensional chain complex, per dimension.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomologyResult {
    pub groups: [AbelianGroup; 3],
    /// The coefficient group the homology is taken with.
    pub coefficients: AbelianGroup,
}

impl HomologyResult {
    /// Free ranks per dimension (the Betti numbers when coefficients are Z).
    pub fn betti(&self) -> [usize; 3] {
        [0, 1, 2].map(|q| self.groups[q].free_rank)
    }

    /// Summand counts per dimension (the Betti numbers over Z_p when the
    /// coefficient group is Z_p for a prime p).
    pub fn summand_counts(&self) -> [usize; 3] {
        [0, 1, 2].map(|q| self.groups[q].summand_count())
    }

    /// Betti numbers over the prime field F_p, read off the integral
    /// result through universal coefficients.
    pub fn betti_mod_p(&self, p: u64) -> [usize; 3] {
        assert_eq!(
            self.coefficients,
            AbelianGroup::integers(),
            "betti_mod_p needs integral homology"
        );
        let p = BigInt::from(p);
        let torsion_p = |q: usize| {
            self.groups[q]
                .torsion
                .iter()
                .filter(|t| (*t % &p).is_zero())
                .count()
        };
        [0, 1, 2].map(|q| {
            self.groups[q].free_rank + torsion_p(q) + if q > 0 { torsion_p(q - 1) } else { 0 }
        })
    }
}

/// Integral homology of the chain complex `C2 --d2--> C1 --d1--> C0`.
///
/// `d1` is (cells of C0) x (cells of C1), `d2` is (C1) x (C2). The free
/// rank of H_q is dim C_q - rank d_q - rank d_{q+1}; the torsion of H_q is
/// the set of invariant factors of d_{q+1} exceeding 1.
pub fn homology_from_chain(d1: &IntMatrix, d2: &IntMatrix) -> Result<HomologyResult, AlgebraError> {
    if d1.cols() != d2.rows() {
        return Err(AlgebraError::DimensionMismatch {
            expected: d1.cols(),
            found: d2.rows(),
        });
    }
    if !d1.mul(d2).is_zero() {
        return Err(AlgebraError::ChainCompositionNonzero);
    }
    let snf1 = smith_normal_form(d1);
    let snf2 = smith_normal_form(d2);
    let (n0, n1, n2) = (d1.rows(), d1.cols(), d2.cols());
    let (r1, r2) = (snf1.rank, snf2.rank);

    let torsion_of = |snf: &SnfResult| {
        snf.diagonal
            .iter()
            .filter(|d| **d > BigInt::one())
            .cloned()
            .collect::<Vec<_>>()
    };
    let h0 = AbelianGroup {
        free_rank: n0 - r1,
        torsion: torsion_of(&snf1),
    };
    let h1 = AbelianGroup {
        free_rank: n1 - r1 - r2,
        torsion: torsion_of(&snf2),
    };
    let h2 = AbelianGroup {
        free_rank: n2 - r2,
        torsion: Vec::new(),
    };
    Ok(HomologyResult {
        groups: [h0, h1, h2],
        coefficients: AbelianGroup::integers(),
    })
}

/// Homology with coefficients in a finitely generated abelian group,
/// evaluated from integral homology by universal coefficients:
/// `H_q(A) = (H_q tensor A) + Tor(H_{q-1}, A)`.
pub fn homology_with_coefficients(
    integral: &HomologyResult,
    coefficients: &AbelianGroup,
) -> Result<HomologyResult, AlgebraError> {
    if integral.coefficients != AbelianGroup::integers() {
        return Err(AlgebraError::NonCanonicalGroup(
            "input homology must be over Z".into(),
        ));
    }
    if !coefficients.is_canonical() {
        return Err(AlgebraError::NonCanonicalGroup(coefficients.to_string()));
    }
    let groups = [0, 1, 2].map(|q| {
        let mut acc = tensor(&integral.groups[q], coefficients);
        if q > 0 {
            let t = tor(&integral.groups[q - 1], coefficients);
            acc.free_rank += t.free_rank;
            acc.torsion.extend(t.torsion);
        }
        acc.canonicalize()
    });
    Ok(HomologyResult {
        groups,
        coefficients: coefficients.clone(),
    })
}

/// `H tensor A` by the closed-form rules: Z tensor X = X,
/// Z_a tensor Z = Z_a, Z_a tensor Z_b = Z_gcd(a,b).
fn tensor(h: &AbelianGroup, a: &AbelianGroup) -> AbelianGroup {
    let mut torsion = Vec::new();
    for t in &a.torsion {
        for _ in 0..h.free_rank {
            torsion.push(t.clone());
        }
    }
    for t in &h.torsion {
        for _ in 0..a.free_rank {
            torsion.push(t.clone());
        }
        for u in &a.torsion {
            let g = t.gcd(u);
            if g > BigInt::one() {
                torsion.push(g);
            }
        }
    }
    AbelianGroup {
        free_rank: h.free_rank * a.free_rank,
        torsion,
    }
}

/// `Tor(H, A)`: only torsion-torsion pairs contribute, each a Z_gcd(a,b).
fn tor(h: &AbelianGroup, a: &AbelianGroup) -> AbelianGroup {
    let mut torsion = Vec::new();
    for t in &h.torsion {
        for u in &a.torsion {
            let g = t.gcd(u);
            if g > BigInt::one() {
                torsion.push(g);
            }
        }
    }
    AbelianGroup {
        free_rank: 0,
        torsion,
    }
}
