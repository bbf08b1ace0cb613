//! Independent matrix-level ground truth in `SL_n` over exact fields:
//! companion matrices, the explicit transition bases diagonalizing the
//! regular block elements into companion form, the determinant identity for
//! the transition matrix, the conjugacy-class computation that re-derives
//! the type-A morphism values without any lattice machinery, and the
//! explicit rank-one projective-line action.
//!
//! Conventions: lower-triangular Borel, `x_{alpha_i}(a) = I + a E_{i+1,i}`,
//! `J_d` the lower bidiagonal all-ones Jordan-type block, and the cyclic
//! matrix `c` with subdiagonal ones and `(-1)^{n-1}` in the corner.

use crate::companion::chi_characters;
use crate::lattice::AbelianElement;
use crate::root_datum::{Family, RootDatum};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::RngExt;

/// Exact scalar: a rational number or an element of a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Rat(BigRational),
    Fp(u64),
}

/// The field the scalars live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldCtx {
    Rational,
    Prime(u64),
}

impl FieldCtx {
    pub fn zero(&self) -> Scalar {
        match self {
            FieldCtx::Rational => Scalar::Rat(BigRational::zero()),
            FieldCtx::Prime(_) => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldCtx::Rational => Scalar::Rat(BigRational::one()),
            FieldCtx::Prime(_) => Scalar::Fp(1),
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldCtx::Rational => Scalar::Rat(BigRational::from(BigInt::from(v))),
            FieldCtx::Prime(p) => {
                let m = v.rem_euclid(*p as i64) as u64;
                Scalar::Fp(m)
            }
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp(v) => *v == 0,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldCtx::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (FieldCtx::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldCtx::Rational, Scalar::Rat(x)) => Scalar::Rat(-x),
            (FieldCtx::Prime(p), Scalar::Fp(x)) => Scalar::Fp((p - x % p) % p),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldCtx::Rational, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (FieldCtx::Prime(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        match (self, a) {
            (FieldCtx::Rational, Scalar::Rat(x)) => Ok(Scalar::Rat(x.recip())),
            (FieldCtx::Prime(p), Scalar::Fp(x)) => Ok(self.pow(&Scalar::Fp(*x), (*p - 2) as i64)),
            _ => panic!("scalar/field mismatch"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, e: i64) -> Scalar {
        if e < 0 {
            let inv = self.inv(a).expect("negative power of zero");
            return self.pow(&inv, -e);
        }
        let mut acc = self.one();
        let mut base = a.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Dense matrix over an exact field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Scalar>,
}

impl FMatrix {
    pub fn zero(ctx: &FieldCtx, rows: usize, cols: usize) -> Self {
        FMatrix { rows, cols, data: vec![ctx.zero(); rows * cols] }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        let mut m = FMatrix::zero(ctx, n, n);
        for i in 0..n {
            m.set(i, i, ctx.one());
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &FMatrix) -> FMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = FMatrix::zero(ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                if ctx.is_zero(self.get(i, l)) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = ctx.mul(self.get(i, l), other.get(l, j));
                    let v = ctx.add(out.get(i, j), &t);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, ctx: &FieldCtx, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = ctx.zero();
                for j in 0..self.cols {
                    acc = ctx.add(&acc, &ctx.mul(self.get(i, j), &v[j]));
                }
                acc
            })
            .collect()
    }

    /// Determinant by Gaussian elimination with exact division.
    pub fn det(&self, ctx: &FieldCtx) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = ctx.one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !ctx.is_zero(m.get(r, col)));
            let Some(pr) = pivot else {
                return ctx.zero();
            };
            if pr != col {
                for j in 0..n {
                    m.data.swap(pr * n + j, col * n + j);
                }
                det = ctx.neg(&det);
            }
            let p = m.get(col, col).clone();
            det = ctx.mul(&det, &p);
            let pinv = ctx.inv(&p).expect("nonzero pivot");
            for r in col + 1..n {
                let factor = ctx.mul(m.get(r, col), &pinv);
                if ctx.is_zero(&factor) {
                    continue;
                }
                for j in col..n {
                    let t = ctx.mul(&factor, m.get(col, j));
                    let v = ctx.sub(m.get(r, j), &t);
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self, ctx: &FieldCtx) -> Result<FMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = FMatrix::identity(ctx, n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !ctx.is_zero(m.get(r, col)));
            let Some(pr) = pivot else {
                return Err(Error::SingularMatrix);
            };
            if pr != col {
                for j in 0..n {
                    m.data.swap(pr * n + j, col * n + j);
                    inv.data.swap(pr * n + j, col * n + j);
                }
            }
            let pinv = ctx.inv(m.get(col, col))?;
            for j in 0..n {
                let v = ctx.mul(m.get(col, j), &pinv);
                m.set(col, j, v);
                let v = ctx.mul(inv.get(col, j), &pinv);
                inv.set(col, j, v);
            }
            for r in 0..n {
                if r == col || ctx.is_zero(m.get(r, col)) {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for j in 0..n {
                    let t = ctx.mul(&factor, m.get(col, j));
                    let v = ctx.sub(m.get(r, j), &t);
                    m.set(r, j, v);
                    let t = ctx.mul(&factor, inv.get(col, j));
                    let v = ctx.sub(inv.get(r, j), &t);
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }
}

/// Polynomials: coefficient vectors, low degree first.
pub fn poly_mul(ctx: &FieldCtx, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![ctx.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if ctx.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ctx.add(&out[i + j], &ctx.mul(x, y));
        }
    }
    out
}

/// `prod (X - roots_i)^mult`, monic.
pub fn poly_from_roots(ctx: &FieldCtx, roots: &[(Scalar, usize)]) -> Vec<Scalar> {
    let mut acc = vec![ctx.one()];
    for (r, mult) in roots {
        let lin = vec![ctx.neg(r), ctx.one()];
        for _ in 0..*mult {
            acc = poly_mul(ctx, &acc, &lin);
        }
    }
    acc
}

pub fn poly_scale(ctx: &FieldCtx, c: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| ctx.mul(c, x)).collect()
}

/// Companion matrix of a monic degree-`n` polynomial with constant term
/// `(-1)^n`: subdiagonal of ones and last column `-coeffs`. Its determinant
/// is one and its characteristic polynomial is the input.
pub fn companion_matrix(ctx: &FieldCtx, coeffs: &[Scalar]) -> Result<FMatrix> {
    let n = coeffs.len().checked_sub(1).filter(|&n| n >= 1).ok_or_else(|| {
        Error::InvalidInput("polynomial must have degree at least one".into())
    })?;
    if coeffs[n] != ctx.one() {
        return Err(Error::InvalidInput("polynomial must be monic".into()));
    }
    let sign = if n % 2 == 0 { ctx.one() } else { ctx.neg(&ctx.one()) };
    if coeffs[0] != sign {
        return Err(Error::InvalidInput("constant term must be (-1)^n".into()));
    }
    let mut m = FMatrix::zero(ctx, n, n);
    for i in 1..n {
        m.set(i, i - 1, ctx.one());
    }
    for i in 0..n {
        m.set(i, n - 1, ctx.neg(&coeffs[i]));
    }
    Ok(m)
}

/// A point of the O-set: `k` pairwise-distinct nonzero scalars with product
/// one, together with the block size `d`; models the regular central
/// element `d(z) = diag(z_1 1_d, ..., z_k 1_d)` times `v = diag(J_d, ...)`.
#[derive(Clone, Debug)]
pub struct BlockRegularElement {
    pub k: usize,
    pub d: usize,
    pub z: Vec<Scalar>,
}

impl BlockRegularElement {
    pub fn new(ctx: &FieldCtx, d: usize, z: Vec<Scalar>) -> Result<Self> {
        let k = z.len();
        if k == 0 || d == 0 {
            return Err(Error::InvalidInput("need k, d >= 1".into()));
        }
        let mut prod = ctx.one();
        for (i, zi) in z.iter().enumerate() {
            if ctx.is_zero(zi) {
                return Err(Error::InvalidInput("O-set entries must be nonzero".into()));
            }
            for zj in &z[i + 1..] {
                if zi == zj {
                    return Err(Error::InvalidInput("O-set entries must be distinct".into()));
                }
            }
            prod = ctx.mul(&prod, zi);
        }
        if prod != ctx.one() {
            return Err(Error::InvalidInput("O-set entries must have product one".into()));
        }
        Ok(BlockRegularElement { k, d, z })
    }

    pub fn n(&self) -> usize {
        self.k * self.d
    }

    /// The matrix `d(z) v = diag(z_1 J_d, ..., z_k J_d)`.
    pub fn dv_matrix(&self, ctx: &FieldCtx) -> FMatrix {
        let n = self.n();
        let mut m = FMatrix::zero(ctx, n, n);
        for b in 0..self.k {
            for i in 0..self.d {
                m.set(b * self.d + i, b * self.d + i, self.z[b].clone());
                if i > 0 {
                    m.set(b * self.d + i, b * self.d + i - 1, self.z[b].clone());
                }
            }
        }
        m
    }

    /// `P_z = prod (X - z_i)^d`.
    pub fn char_poly(&self, ctx: &FieldCtx) -> Vec<Scalar> {
        let roots: Vec<(Scalar, usize)> = self.z.iter().map(|z| (z.clone(), self.d)).collect();
        poly_from_roots(ctx, &roots)
    }

    /// Apply a permutation of the blocks: entry `i` of the result is
    /// `z_{w^{-1}(i)}`.
    pub fn permuted(&self, w: &[usize]) -> BlockRegularElement {
        let mut z = vec![self.z[0].clone(); self.k];
        for (j, &wj) in w.iter().enumerate() {
            z[wj] = self.z[j].clone();
        }
        BlockRegularElement { k: self.k, d: self.d, z }
    }
}

/// `tau(x) = diag(1, ..., 1, x 1_d)`: scales the last `d`-block.
pub fn tau(ctx: &FieldCtx, n: usize, d: usize, x: &Scalar) -> FMatrix {
    let mut m = FMatrix::identity(ctx, n);
    for i in n - d..n {
        m.set(i, i, x.clone());
    }
    m
}

/// `delta(z) = prod_{i<j} (z_i - z_j)`.
pub fn delta(ctx: &FieldCtx, z: &[Scalar]) -> Scalar {
    let mut acc = ctx.one();
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            acc = ctx.mul(&acc, &ctx.sub(&z[i], &z[j]));
        }
    }
    acc
}

/// The ordered transition basis: polynomial `(i-1)d + j` (1-based `i <= k`,
/// `j <= d`) is `z_i^{d-j} (X - z_i)^{j-1} prod_{s != i} (X - z_s)^d`, of
/// degree `(k-1)d + j - 1 < n`.
pub fn transition_basis(ctx: &FieldCtx, bre: &BlockRegularElement) -> Vec<Vec<Scalar>> {
    let mut basis = Vec::with_capacity(bre.n());
    for i in 0..bre.k {
        let others: Vec<(Scalar, usize)> = bre
            .z
            .iter()
            .enumerate()
            .filter(|(s, _)| *s != i)
            .map(|(_, z)| (z.clone(), bre.d))
            .collect();
        let outer = poly_from_roots(ctx, &others);
        for j in 1..=bre.d {
            let inner = poly_from_roots(ctx, &[(bre.z[i].clone(), j - 1)]);
            let scale = ctx.pow(&bre.z[i], (bre.d - j) as i64);
            let p = poly_scale(ctx, &scale, &poly_mul(ctx, &outer, &inner));
            basis.push(p);
        }
    }
    basis
}

/// Transition matrix from the power basis `(1, X, ..., X^{n-1})` to the
/// transition basis: columns are coefficient vectors.
pub fn phi_prime(ctx: &FieldCtx, bre: &BlockRegularElement) -> FMatrix {
    let n = bre.n();
    let basis = transition_basis(ctx, bre);
    let mut m = FMatrix::zero(ctx, n, n);
    for (col, p) in basis.iter().enumerate() {
        for (row, c) in p.iter().enumerate() {
            m.set(row, col, c.clone());
        }
    }
    m
}

/// The determinant-normalized transition matrix `phi(z) = phi'(z)
/// tau(delta(z)^{-d})`, which lies in `SL_n`.
pub fn phi_matrix(ctx: &FieldCtx, bre: &BlockRegularElement) -> Result<FMatrix> {
    let pp = phi_prime(ctx, bre);
    let del = delta(ctx, &bre.z);
    let scale = ctx.pow(&ctx.inv(&del)?, bre.d as i64);
    Ok(pp.mul(ctx, &tau(ctx, bre.n(), bre.d, &scale)))
}

/// Check `det phi'(z) = delta(z)^{d^2}` exactly.
pub fn verify_det_identity(ctx: &FieldCtx, bre: &BlockRegularElement) -> bool {
    let lhs = phi_prime(ctx, bre).det(ctx);
    let rhs = ctx.pow(&delta(ctx, &bre.z), (bre.d * bre.d) as i64);
    lhs == rhs
}

/// Check that multiplication by `X` in the transition basis is `d(z) v`,
/// i.e. `M(P_z) phi'(z) = phi'(z) (d(z) v)`.
pub fn verify_mult_matrix(ctx: &FieldCtx, bre: &BlockRegularElement) -> Result<bool> {
    let pp = phi_prime(ctx, bre);
    let m = companion_matrix(ctx, &bre.char_poly(ctx))?;
    Ok(m.mul(ctx, &pp) == pp.mul(ctx, &bre.dv_matrix(ctx)))
}

/// Signature of a permutation given as the image vector.
pub fn permutation_sign(w: &[usize]) -> i64 {
    let mut inv = 0usize;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 { 1 } else { -1 }
}

/// Block permutation matrix: identity `d`-blocks at positions
/// `(w(j), j)`, conjugating `diag(z)` to `diag(^w z)`.
pub fn block_permutation(ctx: &FieldCtx, w: &[usize], d: usize) -> FMatrix {
    let k = w.len();
    let n = k * d;
    let mut m = FMatrix::zero(ctx, n, n);
    for (j, &wj) in w.iter().enumerate() {
        for i in 0..d {
            m.set(wj * d + i, j * d + i, ctx.one());
        }
    }
    m
}

/// The chosen representative of `w` in `SL_n`: the block permutation times
/// `tau(sign(w))`.
pub fn w_dot(ctx: &FieldCtx, w: &[usize], d: usize) -> FMatrix {
    let bar = block_permutation(ctx, w, d);
    let sign = ctx.from_i64(permutation_sign(w));
    bar.mul(ctx, &tau(ctx, w.len() * d, d, &sign))
}

/// The outcome of the class computation: the product of the constant
/// diagonals of the Toeplitz blocks of `phi(z)^{-1} phi(^w z) w_dot`, and
/// the predicted value `sign(w)^{d-1}`.
pub struct ClassResult {
    pub class: Scalar,
    pub expected: Scalar,
}

impl ClassResult {
    pub fn agrees(&self) -> bool {
        self.class == self.expected
    }
}

/// Form `C = phi(z)^{-1} phi(^w z) w_dot`, check that it centralizes
/// `d(z) v` (blockwise lower-triangular Toeplitz), and extract its class in
/// the center component group as the product of the blocks' constant
/// diagonal values.
pub fn verify_class(
    ctx: &FieldCtx,
    bre: &BlockRegularElement,
    w: &[usize],
) -> Result<ClassResult> {
    if w.len() != bre.k {
        return Err(Error::InvalidInput("permutation size must equal k".into()));
    }
    let wz = bre.permuted(w);
    let phi_z = phi_matrix(ctx, bre)?;
    let phi_wz = phi_matrix(ctx, &wz)?;
    let c = phi_z.inverse(ctx)?.mul(ctx, &phi_wz).mul(ctx, &w_dot(ctx, w, bre.d));
    let dv = bre.dv_matrix(ctx);
    if c.mul(ctx, &dv) != dv.mul(ctx, &c) {
        return Err(Error::InvalidInput(
            "conjugating matrix does not centralize the regular element".into(),
        ));
    }
    let (k, d, n) = (bre.k, bre.d, bre.n());
    let mut class = ctx.one();
    for b in 0..k {
        for i in 0..n {
            for j in 0..n {
                let inside = i >= b * d && i < (b + 1) * d && j >= b * d && j < (b + 1) * d;
                if !inside {
                    if (i / d == b || j / d == b) && !ctx.is_zero(c.get(i, j)) {
                        return Err(Error::InvalidInput(
                            "centralizer element is not block diagonal".into(),
                        ));
                    }
                    continue;
                }
                let (bi, bj) = (i - b * d, j - b * d);
                if bi < bj && !ctx.is_zero(c.get(i, j)) {
                    return Err(Error::InvalidInput(
                        "centralizer block is not lower triangular".into(),
                    ));
                }
                if bi == bj && (bi > 0) && c.get(i, j) != c.get(b * d, b * d) {
                    return Err(Error::InvalidInput(
                        "centralizer block is not Toeplitz on the diagonal".into(),
                    ));
                }
            }
        }
        class = ctx.mul(&class, c.get(b * d, b * d));
    }
    let sign = ctx.from_i64(permutation_sign(w));
    let expected = ctx.pow(&sign, (d as i64 - 1).rem_euclid(2));
    Ok(ClassResult { class, expected })
}

/// Translate a `{+1, -1}` class value into the coordinate encoding of the
/// cyclic center component group of order `d` (trivial element, or the
/// unique element of order two).
pub fn class_as_center_element(ctx: &FieldCtx, class: &Scalar, d: usize) -> Result<AbelianElement> {
    if *class == ctx.one() {
        Ok(AbelianElement { coords: vec![BigInt::zero()] })
    } else if *class == ctx.neg(&ctx.one()) {
        if d % 2 != 0 {
            return Err(Error::InvalidInput("order-two value in odd cyclic group".into()));
        }
        Ok(AbelianElement { coords: vec![BigInt::from(d / 2)] })
    } else {
        Err(Error::InvalidInput("class value is not +1 or -1".into()))
    }
}

/// Check the explicit inverse of the Steinberg cross-section on a regular
/// diagonal element `t` of `SL_n`: the element
/// `g = t prod_i x_{alpha_{n-i}}(chi_i(t))` has the same characteristic
/// polynomial as `t` and is conjugate to its companion matrix through a
/// cyclic-vector basis.
pub fn verify_inverse_omega(ctx: &FieldCtx, t: &[Scalar]) -> Result<bool> {
    let n = t.len();
    if n < 2 {
        return Err(Error::InvalidInput("need n >= 2".into()));
    }
    for (i, ti) in t.iter().enumerate() {
        if ctx.is_zero(ti) {
            return Err(Error::NotRegular("zero diagonal entry".into()));
        }
        for tj in &t[i + 1..] {
            if ti == tj {
                return Err(Error::NotRegular("repeated eigenvalue".into()));
            }
        }
    }
    let mut det = ctx.one();
    for ti in t {
        det = ctx.mul(&det, ti);
    }
    if det != ctx.one() {
        return Err(Error::InvalidInput("determinant must be one".into()));
    }
    let r = n - 1;
    let rd = RootDatum::simply_connected_simple(Family::A, r)?;
    let chi = chi_characters(&rd)?;
    // chi values multiplicatively: the fundamental weight at node m (0-based)
    // evaluates to t_0 ... t_m.
    let mut fw = Vec::with_capacity(r);
    let mut acc = ctx.one();
    for tm in t.iter().take(r) {
        acc = ctx.mul(&acc, tm);
        fw.push(acc.clone());
    }
    let mut g = FMatrix::zero(ctx, n, n);
    for (i, ti) in t.iter().enumerate() {
        g.set(i, i, ti.clone());
    }
    for (i, chi_i) in chi.iter().enumerate() {
        let mut val = ctx.one();
        for (m, e) in chi_i.iter().enumerate() {
            let exp = e.to_i64().expect("small exponent");
            val = ctx.mul(&val, &ctx.pow(&fw[m], exp));
        }
        // x_{alpha_{r - i}} with 0-based node index r - 1 - i: the matrix
        // I + val * E_{(r - i), (r - 1 - i)}.
        let node = r - 1 - i;
        let mut x = FMatrix::identity(ctx, n);
        x.set(node + 1, node, val);
        g = g.mul(ctx, &x);
    }
    let p = poly_from_roots(ctx, &t.iter().map(|ti| (ti.clone(), 1)).collect::<Vec<_>>());
    let m = companion_matrix(ctx, &p)?;
    // Cyclic-vector conjugation to companion form.
    for seed in 0..n {
        let mut e = vec![ctx.zero(); n];
        e[seed] = ctx.one();
        let mut q = FMatrix::zero(ctx, n, n);
        let mut v = e;
        for col in 0..n {
            for row in 0..n {
                q.set(row, col, v[row].clone());
            }
            v = g.mul_vec(ctx, &v);
        }
        if ctx.is_zero(&q.det(ctx)) {
            continue;
        }
        let conj = q.inverse(ctx)?.mul(ctx, &g).mul(ctx, &q);
        return Ok(conj == m);
    }
    Err(Error::NotRegular("no standard basis vector is cyclic".into()))
}

/// A point of the projective line over the field.
pub type ProjPoint = [Scalar; 2];

pub fn proj_eq(ctx: &FieldCtx, a: &ProjPoint, b: &ProjPoint) -> bool {
    ctx.mul(&a[0], &b[1]) == ctx.mul(&a[1], &b[0])
}

/// Check that `[x:y]` is a fixed point of `g` (an eigenvector direction).
pub fn gl2_fixes(ctx: &FieldCtx, g: &FMatrix, pt: &ProjPoint) -> bool {
    let img = g.mul_vec(ctx, pt);
    proj_eq(ctx, &[img[0].clone(), img[1].clone()], pt)
}

/// The explicit rank-one action on fixed pairs `(g, [x:y])` of non-central
/// `2x2` matrices: whichever of the two branch formulas is defined; where
/// both are, they agree.
pub fn gl2_w_action(ctx: &FieldCtx, g: &FMatrix, pt: &ProjPoint) -> Result<ProjPoint> {
    let (b1, b2) = gl2_w_action_branches(ctx, g, pt)?;
    b1.or(b2).ok_or_else(|| Error::InvalidInput("both branch formulas vanish".into()))
}

/// Both branch formulas, each `None` where undefined.
pub fn gl2_w_action_branches(
    ctx: &FieldCtx,
    g: &FMatrix,
    pt: &ProjPoint,
) -> Result<(Option<ProjPoint>, Option<ProjPoint>)> {
    assert_eq!((g.rows, g.cols), (2, 2));
    let (a, b) = (g.get(0, 0), g.get(0, 1));
    let (c, d) = (g.get(1, 0), g.get(1, 1));
    if ctx.is_zero(b) && ctx.is_zero(c) && a == d {
        return Err(Error::InvalidInput("central matrix".into()));
    }
    if !gl2_fixes(ctx, g, pt) {
        return Err(Error::InvalidInput("point is not fixed by the matrix".into()));
    }
    let (x, y) = (&pt[0], &pt[1]);
    let p1 = [
        ctx.mul(b, x),
        ctx.sub(&ctx.mul(&ctx.sub(d, a), x), &ctx.mul(b, y)),
    ];
    let p2 = [
        ctx.sub(&ctx.mul(&ctx.sub(a, d), y), &ctx.mul(c, x)),
        ctx.mul(c, y),
    ];
    let valid = |p: &ProjPoint| !(ctx.is_zero(&p[0]) && ctx.is_zero(&p[1]));
    Ok((valid(&p1).then_some(p1), valid(&p2).then_some(p2)))
}

/// Deterministic O-set sampler. Over the rationals, entries are small
/// random fractions; over a prime field, random nonzero residues. The last
/// entry is forced to make the product one.
pub fn sample_o_set(
    ctx: &FieldCtx,
    k: usize,
    d: usize,
    rng: &mut StdRng,
) -> Result<BlockRegularElement> {
    if let FieldCtx::Prime(p) = ctx {
        if (*p as usize) <= k {
            return Err(Error::InvalidInput("field too small for the O-set".into()));
        }
    }
    'attempt: for _ in 0..10_000 {
        let mut z: Vec<Scalar> = Vec::with_capacity(k);
        for _ in 0..k - 1 {
            let s = match ctx {
                FieldCtx::Rational => {
                    let num = rng.random_range(-12i64..=12);
                    let den = rng.random_range(1i64..=6);
                    if num == 0 {
                        continue 'attempt;
                    }
                    Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
                }
                FieldCtx::Prime(p) => Scalar::Fp(rng.random_range(1..*p)),
            };
            z.push(s);
        }
        let mut prod = ctx.one();
        for zi in &z {
            prod = ctx.mul(&prod, zi);
        }
        z.push(ctx.inv(&prod)?);
        if let Ok(bre) = BlockRegularElement::new(ctx, d, z) {
            return Ok(bre);
        }
    }
    Err(Error::InvalidInput("could not sample an O-set point".into()))
}

/// All permutations of `0..k` as image vectors.
pub fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for i in 0..k {
        let mut next = Vec::new();
        for p in out {
            for pos in 0..=i {
                let mut q = p.clone();
                q.insert(pos, i);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rat(n: i64, d: i64) -> Scalar {
        Scalar::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    #[test]
    fn companion_small() {
        let ctx = FieldCtx::Rational;
        // X - 1.
        let m = companion_matrix(&ctx, &[ctx.neg(&ctx.one()), ctx.one()]).unwrap();
        assert_eq!(m.get(0, 0), &ctx.one());
        // X^2 + aX + 1 with a = 3: [[0, -1], [1, -3]].
        let m = companion_matrix(&ctx, &[ctx.one(), ctx.from_i64(3), ctx.one()]).unwrap();
        assert_eq!(m.get(0, 0), &ctx.zero());
        assert_eq!(m.get(0, 1), &ctx.neg(&ctx.one()));
        assert_eq!(m.get(1, 0), &ctx.one());
        assert_eq!(m.get(1, 1), &ctx.from_i64(-3));
        assert_eq!(m.det(&ctx), ctx.one());
        // Constant-term violation.
        assert!(companion_matrix(&ctx, &[ctx.one(), ctx.one(), ctx.one(), ctx.one()]).is_err());
    }

    #[test]
    fn companion_charpoly_roundtrip() {
        let ctx = FieldCtx::Rational;
        let mut rng = StdRng::seed_from_u64(7);
        for n in 2..=6usize {
            let mut coeffs: Vec<Scalar> =
                (0..n + 1).map(|_| ctx.from_i64(rng.random_range(-4..=4))).collect();
            coeffs[n] = ctx.one();
            coeffs[0] = if n % 2 == 0 { ctx.one() } else { ctx.neg(&ctx.one()) };
            let m = companion_matrix(&ctx, &coeffs).unwrap();
            // Evaluate det(x - M) at n + 1 points and compare to P(x).
            for pt in 0..=(n as i64) {
                let x = ctx.from_i64(pt);
                let mut shifted = FMatrix::zero(&ctx, n, n);
                for i in 0..n {
                    for j in 0..n {
                        let mut v = ctx.neg(m.get(i, j));
                        if i == j {
                            v = ctx.add(&v, &x);
                        }
                        shifted.set(i, j, v);
                    }
                }
                let mut expect = ctx.zero();
                for (e, c) in coeffs.iter().enumerate() {
                    expect = ctx.add(&expect, &ctx.mul(c, &ctx.pow(&x, e as i64)));
                }
                assert_eq!(shifted.det(&ctx), expect);
            }
        }
    }

    #[test]
    fn transition_basis_examples() {
        let ctx = FieldCtx::Rational;
        // k = 1, d = 1: basis {1}, multiplication matrix [z_1] = [1].
        let bre = BlockRegularElement::new(&ctx, 1, vec![ctx.one()]).unwrap();
        let basis = transition_basis(&ctx, &bre);
        assert_eq!(basis, vec![vec![ctx.one()]]);
        assert!(verify_mult_matrix(&ctx, &bre).unwrap());
        // k = 2, d = 2, z = (2, 1/2).
        let bre = BlockRegularElement::new(&ctx, 2, vec![rat(2, 1), rat(1, 2)]).unwrap();
        assert!(verify_mult_matrix(&ctx, &bre).unwrap());
        let dv = bre.dv_matrix(&ctx);
        assert_eq!(dv.get(1, 0), &rat(2, 1));
        assert_eq!(dv.get(3, 2), &rat(1, 2));
        // k = 2, d = 1: eigenbasis.
        let bre = BlockRegularElement::new(&ctx, 1, vec![rat(3, 1), rat(1, 3)]).unwrap();
        assert!(verify_mult_matrix(&ctx, &bre).unwrap());
    }

    #[test]
    fn det_identity_pinned() {
        let ctx = FieldCtx::Rational;
        // k = 2, d = 2, z = (2, 1/2): det phi' = (3/2)^4 = 81/16.
        let bre = BlockRegularElement::new(&ctx, 2, vec![rat(2, 1), rat(1, 2)]).unwrap();
        assert_eq!(phi_prime(&ctx, &bre).det(&ctx), rat(81, 16));
        assert!(verify_det_identity(&ctx, &bre));
        // k = 3, d = 2 over F_101 with z = (2, 3, 1/6 mod 101).
        let ctx = FieldCtx::Prime(101);
        let inv6 = ctx.inv(&ctx.from_i64(6)).unwrap();
        let bre =
            BlockRegularElement::new(&ctx, 2, vec![ctx.from_i64(2), ctx.from_i64(3), inv6])
                .unwrap();
        assert!(verify_det_identity(&ctx, &bre));
    }

    #[test]
    fn class_values() {
        let ctx = FieldCtx::Rational;
        // Identity: class 1.
        let bre = BlockRegularElement::new(&ctx, 2, vec![rat(2, 1), rat(1, 2)]).unwrap();
        let res = verify_class(&ctx, &bre, &[0, 1]).unwrap();
        assert_eq!(res.class, ctx.one());
        assert!(res.agrees());
        // d = 2, k = 2, transposition: class -1.
        let res = verify_class(&ctx, &bre, &[1, 0]).unwrap();
        assert_eq!(res.class, ctx.neg(&ctx.one()));
        assert!(res.agrees());
        // d = 3, k = 2, transposition: class +1.
        let bre = BlockRegularElement::new(&ctx, 3, vec![rat(5, 1), rat(1, 5)]).unwrap();
        let res = verify_class(&ctx, &bre, &[1, 0]).unwrap();
        assert_eq!(res.class, ctx.one());
        assert!(res.agrees());
    }

    #[test]
    fn class_exhaustive_small() {
        let ctx = FieldCtx::Rational;
        let mut rng = StdRng::seed_from_u64(11);
        for k in 1..=3usize {
            for d in 1..=3usize {
                for w in all_permutations(k) {
                    let bre = sample_o_set(&ctx, k, d, &mut rng).unwrap();
                    let res = verify_class(&ctx, &bre, &w).unwrap();
                    assert!(res.agrees(), "k={k} d={d} w={w:?}");
                }
            }
        }
    }

    #[test]
    fn inverse_omega_small() {
        let ctx = FieldCtx::Rational;
        // n = 2, t = diag(2, 1/2): trace of g is 5/2.
        assert!(verify_inverse_omega(&ctx, &[rat(2, 1), rat(1, 2)]).unwrap());
        // Non-regular rejected.
        assert!(matches!(
            verify_inverse_omega(&ctx, &[ctx.one(), ctx.one()]),
            Err(Error::NotRegular(_))
        ));
        // n = 3 over F_101.
        let ctx = FieldCtx::Prime(101);
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..5 {
            let a = Scalar::Fp(rng.random_range(2..100));
            let b = Scalar::Fp(rng.random_range(2..100));
            let c = ctx.inv(&ctx.mul(&a, &b)).unwrap();
            if a == b || b == c || a == c {
                continue;
            }
            if [&a, &b, &c].iter().any(|s| ctx.is_zero(s)) {
                continue;
            }
            assert!(verify_inverse_omega(&ctx, &[a, b, c]).unwrap());
        }
    }

    #[test]
    fn gl2_action_properties() {
        let ctx = FieldCtx::Prime(7);
        // Diagonal regular g: [1:0] and [0:1] are swapped.
        let mut g = FMatrix::identity(&ctx, 2);
        g.set(0, 0, ctx.from_i64(2));
        g.set(1, 1, ctx.from_i64(3));
        let p = gl2_w_action(&ctx, &g, &[ctx.one(), ctx.zero()]).unwrap();
        assert!(proj_eq(&ctx, &p, &[ctx.zero(), ctx.one()]));
        let q = gl2_w_action(&ctx, &g, &p).unwrap();
        assert!(proj_eq(&ctx, &q, &[ctx.one(), ctx.zero()]));
        // Unipotent non-identity g fixes its unique fixed point.
        let mut u = FMatrix::identity(&ctx, 2);
        u.set(1, 0, ctx.one());
        let fixed = [ctx.zero(), ctx.one()];
        let p = gl2_w_action(&ctx, &u, &fixed).unwrap();
        assert!(proj_eq(&ctx, &p, &fixed));
        // Central matrix rejected.
        let id = FMatrix::identity(&ctx, 2);
        assert!(gl2_w_action(&ctx, &id, &fixed).is_err());
    }

    #[test]
    fn sampler_is_valid() {
        let mut rng = StdRng::seed_from_u64(42);
        for ctx in [FieldCtx::Rational, FieldCtx::Prime(13)] {
            for k in 1..=4usize {
                let bre = sample_o_set(&ctx, k, 2, &mut rng).unwrap();
                let mut prod = ctx.one();
                for z in &bre.z {
                    prod = ctx.mul(&prod, z);
                }
                assert_eq!(prod, ctx.one());
            }
        }
    }
}
