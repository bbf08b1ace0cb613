//! Exact integer matrices, Smith normal form, lattice cokernels and finite
//! abelian group arithmetic.
//!
//! Everything here uses arbitrary-precision integers; there is no floating
//! point anywhere in this module. The Smith reduction uses a deterministic
//! pivot rule (smallest nonzero absolute value, ties broken row-major) so
//! that the transforms `U`, `V` are reproducible for golden tests.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A dense rectangular matrix over the integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*x);
            }
        }
        m
    }

    pub fn from_bigint_rows(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, k)] * &other[(k, j)];
                    m[(i, j)] += t;
                }
            }
        }
        m
    }

    /// Matrix–vector product (vector as a column).
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    /// Row-vector–matrix product.
    pub fn vec_mul(v: &[BigInt], m: &IntMatrix) -> Vec<BigInt> {
        assert_eq!(m.rows, v.len());
        (0..m.cols)
            .map(|j| (0..m.rows).map(|i| &v[i] * &m[(i, j)]).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == IntMatrix::identity(self.rows)
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

    /// row[dst] += c * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        for j in 0..self.cols {
            let t = c * &self[(src, j)];
            self[(dst, j)] += t;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        for i in 0..self.rows {
            let t = c * &self[(i, src)];
            self[(i, dst)] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let t = -self[(i, j)].clone();
            self[(i, j)] = t;
        }
    }

    /// Determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = t;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }
}

/// Result of a Smith reduction: `u * m * v = d` with `u`, `v` unimodular and
/// `d` diagonal with a divisibility chain. `v_inv` is the exact inverse of
/// `v`, tracked during the reduction.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, in chain order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.d.rows.min(self.d.cols);
        (0..k).map(|i| self.d[(i, i)].clone()).filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Smith normal form with deterministic pivoting: among the nonzero entries
/// of the working block, pick the one of smallest absolute value, breaking
/// ties row-major.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let mut d = m.clone();
    let (rows, cols) = (d.rows, d.cols);
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);
    let k = rows.min(cols);
    for t in 0..k {
        loop {
            // Deterministic pivot selection over the trailing block.
            let mut piv: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    piv = match piv {
                        None => Some((i, j)),
                        Some((pi, pj)) if d[(i, j)].abs() < d[(pi, pj)].abs() => Some((i, j)),
                        keep => keep,
                    };
                }
            }
            let Some((pi, pj)) = piv else { break };
            if pi != t {
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
            }
            if pj != t {
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                v_inv.swap_rows(t, pj);
            }
            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = &d[(i, t)] / &d[(t, t)];
                if !q.is_zero() {
                    let nq = -q;
                    d.add_row_multiple(i, t, &nq);
                    u.add_row_multiple(i, t, &nq);
                }
                if !d[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = &d[(t, j)] / &d[(t, t)];
                if !q.is_zero() {
                    let nq = -&q;
                    d.add_col_multiple(j, t, &nq);
                    v.add_col_multiple(j, t, &nq);
                    // Inverse of the column operation, applied on the left.
                    v_inv.add_row_multiple(t, j, &q);
                }
                if !d[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Pivot must divide every entry of the remaining block for the
            // invariant-factor chain; fold in an offending row and repeat.
            let mut fixed = false;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&d[(i, j)] % &d[(t, t)]).is_zero() {
                        let one = BigInt::one();
                        d.add_row_multiple(t, i, &one);
                        u.add_row_multiple(t, i, &one);
                        fixed = true;
                        break 'scan;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
    }
    for t in 0..k {
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, d, v, v_inv }
}

/// Cokernel of the sublattice spanned by the rows of `m` inside the ambient
/// lattice of rank `m.cols`: returns the free rank and the torsion part.
pub fn cokernel(m: &IntMatrix) -> (usize, FiniteAbelianGroup) {
    let snf = smith_normal_form(m);
    let factors = snf.invariant_factors();
    let free_rank = m.cols - factors.len();
    (free_rank, FiniteAbelianGroup::from_orders(&factors))
}

/// Order of the torsion part of the cokernel, optionally with all p-power
/// parts of the invariant factors removed.
pub fn torsion_order(m: &IntMatrix, excluded_prime: Option<u64>) -> BigInt {
    let snf = smith_normal_form(m);
    let mut order = BigInt::one();
    for mut f in snf.invariant_factors() {
        if let Some(p) = excluded_prime {
            let p = BigInt::from(p);
            while (&f % &p).is_zero() {
                f /= &p;
            }
        }
        order *= f;
    }
    order
}

/// A basis (as rows) of the kernel lattice { x : m·x = 0 } (x a column
/// vector). May be empty.
pub fn integer_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    (rank..m.cols).map(|j| snf.v.col(j)).collect()
}

/// A finite abelian group in canonical invariant-factor form
/// `Z/d_1 x ... x Z/d_s` with `1 < d_1 | d_2 | ... | d_s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    factors: Vec<BigInt>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: vec![] }
    }

    /// Canonicalize an arbitrary list of cyclic orders (each >= 1).
    pub fn from_orders(orders: &[BigInt]) -> Self {
        let nontrivial: Vec<&BigInt> = orders.iter().filter(|x| !x.is_one()).collect();
        assert!(
            nontrivial.iter().all(|x| x.is_positive()),
            "cyclic orders must be positive"
        );
        if nontrivial.is_empty() {
            return FiniteAbelianGroup::trivial();
        }
        let n = nontrivial.len();
        let mut diag = IntMatrix::zero(n, n);
        for (i, x) in nontrivial.iter().enumerate() {
            diag[(i, i)] = (*x).clone();
        }
        let snf = smith_normal_form(&diag);
        let factors: Vec<BigInt> =
            snf.invariant_factors().into_iter().filter(|x| !x.is_one()).collect();
        FiniteAbelianGroup { factors }
    }

    pub fn cyclic(n: u64) -> Self {
        FiniteAbelianGroup::from_orders(&[BigInt::from(n)])
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn num_generators(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn zero(&self) -> AbelianElement {
        AbelianElement { coords: vec![BigInt::zero(); self.factors.len()] }
    }

    pub fn generator(&self, i: usize) -> AbelianElement {
        let mut coords = vec![BigInt::zero(); self.factors.len()];
        coords[i] = BigInt::one();
        AbelianElement { coords }
    }

    pub fn reduce(&self, coords: &[BigInt]) -> AbelianElement {
        assert_eq!(coords.len(), self.factors.len());
        AbelianElement {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(c, f)| c.mod_floor(f))
                .collect(),
        }
    }

    pub fn add(&self, a: &AbelianElement, b: &AbelianElement) -> AbelianElement {
        let sums: Vec<BigInt> =
            a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        self.reduce(&sums)
    }

    pub fn neg(&self, a: &AbelianElement) -> AbelianElement {
        let negs: Vec<BigInt> = a.coords.iter().map(|x| -x).collect();
        self.reduce(&negs)
    }

    pub fn scalar_mul(&self, k: &BigInt, a: &AbelianElement) -> AbelianElement {
        let m: Vec<BigInt> = a.coords.iter().map(|x| k * x).collect();
        self.reduce(&m)
    }

    pub fn element_order(&self, a: &AbelianElement) -> BigInt {
        let mut ord = BigInt::one();
        for (c, f) in a.coords.iter().zip(&self.factors) {
            if c.is_zero() {
                continue;
            }
            let g = c.gcd(f);
            ord = ord.lcm(&(f / g));
        }
        ord
    }

    /// All elements, in lexicographic coordinate order. Only for small groups.
    pub fn elements(&self) -> Vec<AbelianElement> {
        let mut out = vec![self.zero()];
        for (i, f) in self.factors.iter().enumerate() {
            let f_u = u64::try_from(f).expect("group too large to enumerate");
            let mut next = Vec::with_capacity(out.len() * f_u as usize);
            for e in &out {
                for c in 0..f_u {
                    let mut coords = e.coords.clone();
                    coords[i] = BigInt::from(c);
                    next.push(AbelianElement { coords });
                }
            }
            out = next;
        }
        out
    }

    /// The unique element of order 2, if there is exactly one.
    pub fn unique_order_two_element(&self) -> Result<AbelianElement> {
        let even: Vec<usize> = (0..self.factors.len())
            .filter(|&i| (&self.factors[i] % BigInt::from(2)).is_zero())
            .collect();
        match even.as_slice() {
            [i] => {
                let mut coords = vec![BigInt::zero(); self.factors.len()];
                coords[*i] = &self.factors[*i] / 2;
                Ok(AbelianElement { coords })
            }
            [] => Err(Error::GroupMismatch("no element of order 2".into())),
            _ => Err(Error::GroupMismatch(
                "element of order 2 is not unique".into(),
            )),
        }
    }
}

/// An element of a [`FiniteAbelianGroup`], as coordinates on the canonical
/// generators (coordinate i reduced mod factor i).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianElement {
    pub coords: Vec<BigInt>,
}

impl AbelianElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// A homomorphism between finite abelian groups, as an integer matrix acting
/// on canonical coordinates (columns indexed by domain generators).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianHom {
    pub domain: FiniteAbelianGroup,
    pub codomain: FiniteAbelianGroup,
    pub matrix: IntMatrix,
}

impl AbelianHom {
    pub fn new(
        domain: FiniteAbelianGroup,
        codomain: FiniteAbelianGroup,
        matrix: IntMatrix,
    ) -> Result<Self> {
        if matrix.rows != codomain.num_generators() || matrix.cols != domain.num_generators() {
            return Err(Error::GroupMismatch("hom matrix shape mismatch".into()));
        }
        // Well-definedness: the image of each generator must be killed by the
        // generator's order.
        for j in 0..matrix.cols {
            let a = &domain.invariant_factors()[j];
            for i in 0..matrix.rows {
                let b = &codomain.invariant_factors()[i];
                if !((a * &matrix[(i, j)]) % b).is_zero() {
                    return Err(Error::IllDefinedHom);
                }
            }
        }
        Ok(AbelianHom { domain, codomain, matrix })
    }

    pub fn identity(group: &FiniteAbelianGroup) -> Self {
        AbelianHom {
            domain: group.clone(),
            codomain: group.clone(),
            matrix: IntMatrix::identity(group.num_generators()),
        }
    }

    pub fn zero_map(domain: &FiniteAbelianGroup, codomain: &FiniteAbelianGroup) -> Self {
        AbelianHom {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: IntMatrix::zero(codomain.num_generators(), domain.num_generators()),
        }
    }

    pub fn apply(&self, a: &AbelianElement) -> AbelianElement {
        assert_eq!(a.coords.len(), self.domain.num_generators());
        self.codomain.reduce(&self.matrix.mul_vec(&a.coords))
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &AbelianHom) -> Result<AbelianHom> {
        if self.domain != other.codomain {
            return Err(Error::GroupMismatch("composition domain mismatch".into()));
        }
        AbelianHom::new(
            other.domain.clone(),
            self.codomain.clone(),
            self.matrix.mul(&other.matrix),
        )
    }

    /// Structure of the cokernel.
    pub fn cokernel_group(&self) -> FiniteAbelianGroup {
        // Quotient of the codomain by the image: relations are the generator
        // images (columns) together with the codomain orders.
        let m = self.codomain.num_generators();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for j in 0..self.matrix.cols {
            rows.push(self.matrix.col(j));
        }
        for (i, b) in self.codomain.invariant_factors().iter().enumerate() {
            let mut r = vec![BigInt::zero(); m];
            r[i] = b.clone();
            rows.push(r);
        }
        let rel = IntMatrix::from_bigint_rows(&rows);
        let (free, tors) = cokernel(&rel);
        assert_eq!(free, 0);
        tors
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel_group().is_trivial()
    }

    pub fn kernel_order(&self) -> BigInt {
        let image_order = self.codomain.order() / self.cokernel_group().order();
        self.domain.order() / image_order
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.domain.order() == self.codomain.order()
    }

    /// Kernel subgroup: its abstract structure together with generators
    /// (one per canonical invariant factor) as elements of the domain.
    pub fn kernel(&self) -> (FiniteAbelianGroup, Vec<AbelianElement>) {
        let n = self.domain.num_generators();
        let m = self.codomain.num_generators();
        let a = self.domain.invariant_factors();
        let b = self.codomain.invariant_factors();
        // Lattice of x in Z^n with matrix·x ≡ 0 mod codomain orders:
        // project the integer kernel of [matrix | -diag(b)] to the first n
        // coordinates.
        let mut block = IntMatrix::zero(m, n + m);
        for i in 0..m {
            for j in 0..n {
                block[(i, j)] = self.matrix[(i, j)].clone();
            }
            block[(i, n + i)] = -b[i].clone();
        }
        let gens_ext = integer_kernel(&block);
        let proj: Vec<Vec<BigInt>> =
            gens_ext.iter().map(|v| v[..n].to_vec()).collect();
        // Row basis of the projected lattice L (full rank n: it contains
        // diag(a)·Z^n).
        let mut all_rows = proj;
        for (i, ai) in a.iter().enumerate() {
            let mut r = vec![BigInt::zero(); n];
            r[i] = ai.clone();
            all_rows.push(r);
        }
        let gen_mat = IntMatrix::from_bigint_rows(&all_rows);
        let basis = row_basis(&gen_mat);
        let s = basis.rows;
        debug_assert_eq!(s, n);
        // Relations among the basis rows modulo diag(a)·Z^n: coefficient
        // vectors c with c·basis ∈ diag(a)·Z^n.
        let mut rel_rows: Vec<Vec<BigInt>> = Vec::new();
        for (i, ai) in a.iter().enumerate() {
            let mut target = vec![BigInt::zero(); n];
            target[i] = ai.clone();
            let c = solve_left(&basis, &target)
                .expect("diag(a) lattice is contained in L");
            rel_rows.push(c);
        }
        let rel = IntMatrix::from_bigint_rows(&rel_rows);
        let snf = smith_normal_form(&rel);
        // Quotient Z^s / rows(rel): coordinates via V; generator of quotient
        // coordinate j is row j of V^{-1}.
        let factors = {
            let k = snf.d.rows.min(snf.d.cols);
            let mut fs: Vec<BigInt> = (0..k).map(|i| snf.d[(i, i)].clone()).collect();
            fs.extend(std::iter::repeat(BigInt::zero()).take(s.saturating_sub(k)));
            fs
        };
        // The kernel is finite, so no factor may be 0 (rel has full rank s).
        assert!(factors.iter().all(|f| !f.is_zero()));
        let mut group_orders = Vec::new();
        let mut gens = Vec::new();
        for (j, f) in factors.iter().enumerate() {
            if f.is_one() {
                continue;
            }
            group_orders.push(f.clone());
            // c-coords of the generator, then back to domain coordinates.
            let c = snf.v_inv.row(j);
            let x = IntMatrix::vec_mul(&c, &basis);
            gens.push(self.domain.reduce(&x));
        }
        (FiniteAbelianGroup::from_orders(&group_orders), gens)
    }
}

/// A basis (as rows) of the row space of `m` over the integers.
pub fn row_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    // rows of D·V^{-1} with nonzero diagonal entry form a basis of the row
    // space (U^{-1} acts by unimodular row operations).
    let dv = snf.d.mul(&snf.v_inv);
    let rows: Vec<Vec<BigInt>> = (0..snf.rank()).map(|i| dv.row(i)).collect();
    IntMatrix::from_bigint_rows(&rows)
}

/// Solve `c · basis = x` over the integers, where `basis` has full row rank.
pub fn solve_left(basis: &IntMatrix, x: &[BigInt]) -> Option<Vec<BigInt>> {
    let snf = smith_normal_form(basis);
    let r = snf.rank();
    if r != basis.rows {
        return None;
    }
    let t = IntMatrix::vec_mul(x, &snf.v);
    let mut c_prime = vec![BigInt::zero(); basis.rows];
    for i in 0..basis.cols {
        if i < r {
            let d = &snf.d[(i, i)];
            if !(&t[i] % d).is_zero() {
                return None;
            }
            c_prime[i] = &t[i] / d;
        } else if !t[i].is_zero() {
            return None;
        }
    }
    Some(IntMatrix::vec_mul(&c_prime, &snf.u))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn snf_identity() {
        let m = IntMatrix::identity(3);
        let snf = smith_normal_form(&m);
        assert!(snf.d.is_identity());
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
    }

    #[test]
    fn snf_two_by_three() {
        let m = IntMatrix::from_rows(&[vec![3, 2, -1], vec![1, 0, -1]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.invariant_factors(), vec![big(1), big(2)]);
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
        assert!(snf.v.mul(&snf.v_inv).is_identity());
        let (free, tors) = cokernel(&m);
        assert_eq!(free, 1);
        assert_eq!(tors, FiniteAbelianGroup::cyclic(2));
    }

    #[test]
    fn snf_single_entry() {
        let m = IntMatrix::from_rows(&[vec![2]]);
        let snf = smith_normal_form(&m);
        assert_eq!(snf.invariant_factors(), vec![big(2)]);
    }

    #[test]
    fn cokernel_rank_one_sublattice() {
        let m = IntMatrix::from_rows(&[vec![1, 2]]);
        let (free, tors) = cokernel(&m);
        assert_eq!(free, 1);
        assert!(tors.is_trivial());
    }

    #[test]
    fn cokernel_z5_example() {
        let m = IntMatrix::from_rows(&[
            vec![3, -1, 0, 0, 0],
            vec![4, -1, 2, -1, -1],
            vec![-1, 0, -1, 0, 2],
            vec![1, 0, -1, 2, 0],
        ]);
        let (free, tors) = cokernel(&m);
        assert_eq!(free, 1);
        assert_eq!(tors, FiniteAbelianGroup::cyclic(4));
    }

    #[test]
    fn torsion_order_excluded_prime() {
        let m2 = IntMatrix::from_rows(&[vec![2]]);
        assert_eq!(torsion_order(&m2, Some(2)), big(1));
        assert_eq!(torsion_order(&m2, Some(3)), big(2));
        let m6 = IntMatrix::from_rows(&[vec![6]]);
        assert_eq!(torsion_order(&m6, Some(3)), big(2));
        assert_eq!(torsion_order(&m6, None), big(6));
    }

    #[test]
    fn group_canonical_form() {
        // Z/2 x Z/3 = Z/6 canonically.
        let g = FiniteAbelianGroup::from_orders(&[big(2), big(3)]);
        assert_eq!(g.invariant_factors(), &[big(6)]);
        let h = FiniteAbelianGroup::from_orders(&[big(2), big(4)]);
        assert_eq!(h.invariant_factors(), &[big(2), big(4)]);
        assert_eq!(h.order(), big(8));
    }

    #[test]
    fn hom_identity_and_composition() {
        let g = FiniteAbelianGroup::cyclic(4);
        let id = AbelianHom::identity(&g);
        let h = FiniteAbelianGroup::cyclic(2);
        let red = AbelianHom::new(g.clone(), h.clone(), IntMatrix::from_rows(&[vec![1]])).unwrap();
        let comp = red.compose(&id).unwrap();
        assert_eq!(comp, red);
        // Reduction sends the generator to the generator.
        assert_eq!(red.apply(&g.generator(0)), h.generator(0));
    }

    #[test]
    fn hom_kernel_of_reduction() {
        let g = FiniteAbelianGroup::cyclic(4);
        let h = FiniteAbelianGroup::cyclic(2);
        let red = AbelianHom::new(g.clone(), h, IntMatrix::from_rows(&[vec![1]])).unwrap();
        assert!(red.is_surjective());
        assert_eq!(red.kernel_order(), big(2));
        let (ker, gens) = red.kernel();
        assert_eq!(ker, FiniteAbelianGroup::cyclic(2));
        assert_eq!(gens.len(), 1);
        // Generated by twice the generator of Z/4.
        assert_eq!(
            gens[0],
            g.scalar_mul(&big(2), &g.generator(0))
        );
    }

    #[test]
    fn ill_defined_hom_rejected() {
        let g = FiniteAbelianGroup::cyclic(2);
        let h = FiniteAbelianGroup::cyclic(4);
        // Z/2 -> Z/4 sending generator to generator is not well-defined.
        let r = AbelianHom::new(g, h, IntMatrix::from_rows(&[vec![1]]));
        assert!(r.is_err());
    }

    #[test]
    fn element_order_and_unique_involution() {
        let g = FiniteAbelianGroup::from_orders(&[big(2), big(4)]);
        let e = g.reduce(&[big(1), big(2)]);
        assert_eq!(g.element_order(&e), big(2));
        assert!(g.unique_order_two_element().is_err());
        let c4 = FiniteAbelianGroup::cyclic(4);
        let t = c4.unique_order_two_element().unwrap();
        assert_eq!(t.coords, vec![big(2)]);
    }

    #[test]
    fn solve_left_roundtrip() {
        let basis = IntMatrix::from_rows(&[vec![2, 1, 0], vec![0, 1, 3]]);
        let c = vec![big(3), big(-2)];
        let x = IntMatrix::vec_mul(&c, &basis);
        assert_eq!(solve_left(&basis, &x), Some(c));
        assert_eq!(solve_left(&basis, &[big(1), big(0), big(0)]), None);
    }

    #[test]
    fn det_small() {
        let m = IntMatrix::from_rows(&[vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]]);
        assert_eq!(m.det(), big(2));
        assert_eq!(IntMatrix::identity(4).det(), big(1));
    }
}
