//! Root data of simply connected quasi-simple groups and products, their
//! central quotients, center component groups, the canonical maps between
//! them, cuspidality and self-opposedness.
//!
//! Conventions: the Cartan matrix is `C[i][j] = <alpha_i, alpha_j^vee>`;
//! for a simply connected datum the X-basis is the fundamental weights, so
//! the simple root `alpha_i` has X-coordinates equal to row `i` of `C`, and
//! the Y-basis is the simple coroots. The pairing between X- and
//! Y-coordinates is the dot product. Node numbering follows Bourbaki.

use crate::lattice::{
    integer_kernel, row_basis, smith_normal_form, solve_left, AbelianElement,
    AbelianHom, FiniteAbelianGroup, IntMatrix,
};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashSet;
use std::fmt;

/// Simple-group families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }
}

/// A product of simple types, e.g. `B3` or `A1xA3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CartanType {
    pub components: Vec<(Family, usize)>,
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(fam, r)| format!("{}{}", fam.letter(), r))
            .collect();
        write!(f, "{}", parts.join("x"))
    }
}

impl CartanType {
    pub fn simple(family: Family, rank: usize) -> Result<Self> {
        let ct = CartanType { components: vec![(family, rank)] };
        ct.validate()?;
        Ok(ct)
    }

    pub fn new(components: Vec<(Family, usize)>) -> Result<Self> {
        let ct = CartanType { components };
        ct.validate()?;
        Ok(ct)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut components = Vec::new();
        for tok in s.split(['x', 'X']) {
            let tok = tok.trim();
            if tok.is_empty() {
                return Err(Error::InvalidType(s.to_string()));
            }
            let fam = match tok.chars().next().unwrap().to_ascii_uppercase() {
                'A' => Family::A,
                'B' => Family::B,
                'C' => Family::C,
                'D' => Family::D,
                'E' => Family::E,
                'F' => Family::F,
                'G' => Family::G,
                _ => return Err(Error::InvalidType(s.to_string())),
            };
            let rank: usize = tok[1..]
                .parse()
                .map_err(|_| Error::InvalidType(s.to_string()))?;
            components.push((fam, rank));
        }
        CartanType::new(components)
    }

    fn validate(&self) -> Result<()> {
        for &(fam, r) in &self.components {
            let ok = match fam {
                Family::A => r >= 1,
                Family::B | Family::C | Family::D => r >= 2,
                Family::E => (6..=8).contains(&r),
                Family::F => r == 4,
                Family::G => r == 2,
            };
            if !ok {
                return Err(Error::InvalidType(format!("{}{}", fam.letter(), r)));
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|&(_, r)| r).sum()
    }

    pub fn is_simple(&self) -> bool {
        self.components.len() == 1
    }

    /// Canonical form as an abstract Coxeter type: `C_n` is relabelled `B_n`
    /// (same Coxeter system), low-rank `D` coincidences are resolved, and
    /// components are sorted. Used for comparing relative Weyl types.
    pub fn canonical(&self) -> CartanType {
        let mut comps: Vec<(Family, usize)> = Vec::new();
        for &(fam, r) in &self.components {
            match (fam, r) {
                (Family::C, n) => comps.push((Family::B, n)),
                (Family::B, 1) => comps.push((Family::A, 1)),
                (Family::B, 2) => comps.push((Family::B, 2)),
                (Family::D, 2) => {
                    comps.push((Family::A, 1));
                    comps.push((Family::A, 1));
                }
                (Family::D, 3) => comps.push((Family::A, 3)),
                other => comps.push(other),
            }
        }
        comps.sort();
        CartanType { components: comps }
    }

    /// Primes that are bad for this type.
    pub fn bad_primes(&self) -> Vec<u64> {
        let mut out: HashSet<u64> = HashSet::new();
        for &(fam, r) in &self.components {
            match fam {
                Family::A => {}
                Family::B | Family::C | Family::D => {
                    out.insert(2);
                }
                Family::G | Family::F => {
                    out.insert(2);
                    out.insert(3);
                }
                Family::E => {
                    out.insert(2);
                    out.insert(3);
                    if r == 8 {
                        out.insert(5);
                    }
                }
            }
        }
        let mut v: Vec<u64> = out.into_iter().collect();
        v.sort();
        v
    }
}

/// Cartan matrix `C[i][j] = <alpha_i, alpha_j^vee>` of a simple type, in
/// Bourbaki numbering.
pub fn cartan_matrix_simple(family: Family, rank: usize) -> IntMatrix {
    let n = rank;
    let mut c = IntMatrix::zero(n, n);
    for i in 0..n {
        c[(i, i)] = BigInt::from(2);
    }
    let m1 = BigInt::from(-1);
    let m2 = BigInt::from(-2);
    let chain = |c: &mut IntMatrix, upto: usize| {
        for i in 0..upto {
            c[(i, i + 1)] = BigInt::from(-1);
            c[(i + 1, i)] = BigInt::from(-1);
        }
    };
    match family {
        Family::A => chain(&mut c, n - 1),
        Family::B => {
            // alpha_n short: <alpha_{n-1}, alpha_n^vee> = -2.
            chain(&mut c, n - 1);
            c[(n - 2, n - 1)] = m2;
        }
        Family::C => {
            // alpha_n long: <alpha_n, alpha_{n-1}^vee> = -2.
            chain(&mut c, n - 1);
            c[(n - 1, n - 2)] = m2;
        }
        Family::D => {
            chain(&mut c, n - 2);
            c[(n - 3, n - 1)] = m1.clone();
            c[(n - 1, n - 3)] = m1;
        }
        Family::E => {
            // Chain 1-3-4-5-...-n with node 2 attached to node 4.
            let link = |c: &mut IntMatrix, a: usize, b: usize| {
                c[(a - 1, b - 1)] = BigInt::from(-1);
                c[(b - 1, a - 1)] = BigInt::from(-1);
            };
            link(&mut c, 1, 3);
            link(&mut c, 2, 4);
            for v in 3..n {
                link(&mut c, v, v + 1);
            }
        }
        Family::F => {
            // 1-2=>3-4 with alpha_2 long, alpha_3 short.
            chain(&mut c, 3);
            c[(1, 2)] = m2;
        }
        Family::G => {
            // alpha_1 short, alpha_2 long: <alpha_2, alpha_1^vee> = -3.
            c[(0, 1)] = m1;
            c[(1, 0)] = BigInt::from(-3);
        }
    }
    c
}

/// Block-diagonal Cartan matrix of a product type.
pub fn cartan_matrix(ct: &CartanType) -> IntMatrix {
    let n = ct.rank();
    let mut c = IntMatrix::zero(n, n);
    let mut off = 0;
    for &(fam, r) in &ct.components {
        let blk = cartan_matrix_simple(fam, r);
        for i in 0..r {
            for j in 0..r {
                c[(off + i, off + j)] = blk[(i, j)].clone();
            }
        }
        off += r;
    }
    c
}

/// A root datum: lattices X, Y with a perfect pairing (dot product in
/// coordinates), simple roots in X-coordinates, simple coroots in
/// Y-coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDatum {
    pub ctype: Option<CartanType>,
    pub rank: usize,
    pub x_rank: usize,
    pub simple_roots: Vec<Vec<BigInt>>,
    pub simple_coroots: Vec<Vec<BigInt>>,
}

impl RootDatum {
    /// Simply connected datum: X-basis = fundamental weights, Y-basis =
    /// simple coroots, so `alpha_i` is row `i` of the Cartan matrix and
    /// `alpha_i^vee = e_i`.
    pub fn simply_connected(ct: &CartanType) -> Result<RootDatum> {
        ct.validate()?;
        let n = ct.rank();
        let c = cartan_matrix(ct);
        let simple_roots: Vec<Vec<BigInt>> = (0..n).map(|i| c.row(i)).collect();
        let simple_coroots: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut v = vec![BigInt::zero(); n];
                v[i] = BigInt::one();
                v
            })
            .collect();
        Ok(RootDatum {
            ctype: Some(ct.clone()),
            rank: n,
            x_rank: n,
            simple_roots,
            simple_coroots,
        })
    }

    pub fn simply_connected_simple(family: Family, rank: usize) -> Result<RootDatum> {
        RootDatum::simply_connected(&CartanType::simple(family, rank)?)
    }

    /// Pairing `<x, y>` between X-coordinates and Y-coordinates.
    pub fn pair(x: &[BigInt], y: &[BigInt]) -> BigInt {
        x.iter().zip(y).map(|(a, b)| a * b).sum()
    }

    /// The Cartan matrix `<alpha_i, alpha_j^vee>` recomputed from the data.
    pub fn cartan(&self) -> IntMatrix {
        let mut c = IntMatrix::zero(self.rank, self.rank);
        for i in 0..self.rank {
            for j in 0..self.rank {
                c[(i, j)] = RootDatum::pair(&self.simple_roots[i], &self.simple_coroots[j]);
            }
        }
        c
    }

    /// True when the simple coroots form a basis of Y (the simply connected
    /// condition for semisimple data).
    pub fn is_simply_connected(&self) -> bool {
        if self.rank != self.x_rank {
            return false;
        }
        let m = IntMatrix::from_bigint_rows(&self.simple_coroots);
        m.det().abs().is_one()
    }

    /// Positive roots in root coordinates (coefficients on the simple roots).
    pub fn positive_roots_coords(&self) -> Vec<Vec<BigInt>> {
        let r = self.rank;
        let c = self.cartan();
        let mut all: HashSet<Vec<BigInt>> = HashSet::new();
        let mut queue: Vec<Vec<BigInt>> = Vec::new();
        for i in 0..r {
            let mut e = vec![BigInt::zero(); r];
            e[i] = BigInt::one();
            all.insert(e.clone());
            queue.push(e);
        }
        while let Some(rc) = queue.pop() {
            for j in 0..r {
                let pairing: BigInt = (0..r).map(|i| &rc[i] * &c[(i, j)]).sum();
                let mut new = rc.clone();
                new[j] -= pairing;
                if all.insert(new.clone()) {
                    queue.push(new);
                }
            }
        }
        let mut pos: Vec<Vec<BigInt>> = all
            .into_iter()
            .filter(|rc| rc.iter().all(|x| !x.is_negative()))
            .collect();
        pos.sort();
        pos
    }

    /// X-coordinates of a root given in root coordinates.
    pub fn root_x_coords(&self, rc: &[BigInt]) -> Vec<BigInt> {
        let mut x = vec![BigInt::zero(); self.x_rank];
        for (i, ci) in rc.iter().enumerate() {
            for (a, xa) in x.iter_mut().enumerate() {
                *xa += ci * &self.simple_roots[i][a];
            }
        }
        x
    }

    /// Positive roots in X-coordinates.
    pub fn positive_roots(&self) -> Vec<Vec<BigInt>> {
        self.positive_roots_coords()
            .iter()
            .map(|rc| self.root_x_coords(rc))
            .collect()
    }

    /// Bad primes of the declared type.
    pub fn bad_primes(&self) -> Result<Vec<u64>> {
        match &self.ctype {
            Some(ct) => Ok(ct.bad_primes()),
            None => Err(Error::InvalidInput(
                "root datum has no declared type; cannot determine bad primes".into(),
            )),
        }
    }

    /// The fundamental coweight dual to `alpha_i` (simply connected data):
    /// the rational coweight `y` with `<alpha_j, y> = delta_{ij}`.
    pub fn fundamental_coweight(&self, i: usize) -> Vec<BigRational> {
        assert_eq!(self.rank, self.x_rank, "semisimple datum required");
        let c = self.cartan();
        let mut rhs = vec![BigRational::zero(); self.rank];
        rhs[i] = BigRational::one();
        // Solve C^T? <alpha_j, y> = sum_a alpha_j[a] y[a]; for simply
        // connected data alpha_j's X-coords are row j of C, but solve with
        // the actual simple_roots matrix to stay general.
        let a = IntMatrix::from_bigint_rows(&self.simple_roots);
        let _ = c;
        solve_rational(&a, &rhs).expect("simple roots are linearly independent")
    }
}

/// Solve `A y = rhs` over the rationals for square invertible `A`.
pub fn solve_rational(a: &IntMatrix, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.rows;
    assert_eq!(a.cols, n);
    assert_eq!(rhs.len(), n);
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n)
                .map(|j| BigRational::from(a[(i, j)].clone()))
                .collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for j in col..=n {
            m[col][j] = &m[col][j] / &p;
        }
        for i in 0..n {
            if i != col && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in col..=n {
                    let t = &m[col][j] * &f;
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n].clone()).collect())
}

/// The center component group of the standard Levi on `levi` (0-based node
/// indices): the torsion of X / Z·Delta_I, with its SNF presentation.
///
/// Elements of the component group of the center are represented as
/// characters of this torsion group with values in Q/Z, encoded on the SNF
/// generators: coordinate `c_j` means the character sends generator `j` to
/// `c_j / d_j`.
#[derive(Clone, Debug)]
pub struct CenterData {
    pub group: FiniteAbelianGroup,
    pub x_rank: usize,
    v: IntMatrix,
    v_inv: IntMatrix,
    torsion_positions: Vec<usize>,
    free_positions: Vec<usize>,
}

impl CenterData {
    pub fn free_rank(&self) -> usize {
        self.free_positions.len()
    }

    /// Class coordinates of a lattice vector in the torsion subgroup of
    /// X / Z·Delta_I. Errors when the class is not torsion.
    pub fn class_coords(&self, x: &[BigInt]) -> Result<AbelianElement> {
        let c = IntMatrix::vec_mul(x, &self.v);
        for &j in &self.free_positions {
            if !c[j].is_zero() {
                return Err(Error::InvalidInput(
                    "lattice vector is not torsion modulo the Levi root lattice".into(),
                ));
            }
        }
        let coords: Vec<BigInt> = self
            .torsion_positions
            .iter()
            .zip(self.group.invariant_factors())
            .map(|(&j, d)| c[j].mod_floor(d))
            .collect();
        Ok(AbelianElement { coords })
    }

    /// A lattice representative of the j-th torsion generator.
    pub fn generator_rep(&self, j: usize) -> Vec<BigInt> {
        self.v_inv.row(self.torsion_positions[j])
    }

    /// The element of the center component group defined by a rational
    /// coweight `y` with `<alpha_i, y>` integral for all `i` in the Levi:
    /// the character `x -> <x, y> mod Z`.
    pub fn element_from_coweight(
        &self,
        rd: &RootDatum,
        levi: &[usize],
        y: &[BigRational],
    ) -> Result<AbelianElement> {
        for &i in levi {
            let p: BigRational = rd.simple_roots[i]
                .iter()
                .zip(y)
                .map(|(a, b)| BigRational::from(a.clone()) * b)
                .sum();
            if !p.is_integer() {
                return Err(Error::InvalidInput(
                    "coweight does not pair integrally with the Levi roots".into(),
                ));
            }
        }
        let mut coords = Vec::new();
        for (j, d) in self.group.invariant_factors().iter().enumerate() {
            let g = self.generator_rep(j);
            let p: BigRational = g
                .iter()
                .zip(y)
                .map(|(a, b)| BigRational::from(a.clone()) * b)
                .sum();
            let scaled = BigRational::from(d.clone()) * p;
            if !scaled.is_integer() {
                return Err(Error::InvalidInput(
                    "coweight is not trivial on the identity component".into(),
                ));
            }
            coords.push(scaled.to_integer().mod_floor(d));
        }
        Ok(AbelianElement { coords })
    }
}

/// Compute the center component group data of the standard Levi on `levi`.
pub fn center_component_group(rd: &RootDatum, levi: &[usize]) -> CenterData {
    let rows: Vec<Vec<BigInt>> = levi.iter().map(|&i| rd.simple_roots[i].clone()).collect();
    let m = if rows.is_empty() {
        IntMatrix::zero(0, rd.x_rank)
    } else {
        IntMatrix::from_bigint_rows(&rows)
    };
    let snf = smith_normal_form(&m);
    let k = snf.d.rows.min(snf.d.cols);
    let mut torsion_positions = Vec::new();
    let mut free_positions = Vec::new();
    let mut factors = Vec::new();
    for j in 0..rd.x_rank {
        let d = if j < k { snf.d[(j, j)].clone() } else { BigInt::zero() };
        if d.is_zero() {
            free_positions.push(j);
        } else if !d.is_one() {
            torsion_positions.push(j);
            factors.push(d);
        }
    }
    CenterData {
        group: FiniteAbelianGroup::from_orders(&factors),
        x_rank: rd.x_rank,
        v: snf.v,
        v_inv: snf.v_inv,
        torsion_positions,
        free_positions,
    }
}

/// The canonical surjection from the center component group of the Levi on
/// `j_set` to that of the Levi on `i_set`, for `i_set` a subset of `j_set`.
///
/// On the character encoding this is precomposition with the map of torsion
/// groups induced by the identity of X.
pub fn h_map(rd: &RootDatum, i_set: &[usize], j_set: &[usize]) -> Result<AbelianHom> {
    let i_sorted: HashSet<usize> = i_set.iter().copied().collect();
    let j_sorted: HashSet<usize> = j_set.iter().copied().collect();
    if !i_sorted.is_subset(&j_sorted) {
        return Err(Error::InvalidLevi(
            "h map requires nested Levi subsets".into(),
        ));
    }
    let ci = center_component_group(rd, i_set);
    let cj = center_component_group(rd, j_set);
    let di = ci.group.invariant_factors();
    let dj = cj.group.invariant_factors();
    let mut h = IntMatrix::zero(di.len(), dj.len());
    for (gi, d_i) in di.iter().enumerate() {
        let rep = ci.generator_rep(gi);
        let t = cj.class_coords(&rep)?;
        for (gj, d_j) in dj.iter().enumerate() {
            // Entry of the dual map on character coordinates.
            let num = d_i * &t.coords[gj];
            let (q, r) = num.div_rem(d_j);
            if !r.is_zero() {
                return Err(Error::GroupMismatch(
                    "h map entry is not integral; presentation inconsistency".into(),
                ));
            }
            h[(gi, gj)] = q.mod_floor(d_i);
        }
    }
    AbelianHom::new(cj.group.clone(), ci.group.clone(), h)
}

/// Cuspidality: the kernel of the canonical map to every proper sub-Levi's
/// center component group is nontrivial. Checking the maximal proper subsets
/// suffices, since kernels only grow as the target shrinks.
pub fn is_cuspidal(rd: &RootDatum, levi: &[usize]) -> bool {
    let mut i_sorted = levi.to_vec();
    i_sorted.sort_unstable();
    for drop in 0..i_sorted.len() {
        let sub: Vec<usize> = i_sorted
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != drop)
            .map(|(_, &v)| v)
            .collect();
        let h = h_map(rd, &sub, &i_sorted).expect("nested by construction");
        if h.kernel_order().is_one() {
            return false;
        }
    }
    true
}

/// Central quotient by a subgroup of the full center's component group,
/// given by generators in the presentation of `center_component_group(rd,
/// all nodes)`. Returns the new datum together with the matrix whose rows
/// are the new X-basis in old X-coordinates.
pub fn central_quotient(
    rd: &RootDatum,
    subgroup_gens: &[AbelianElement],
) -> Result<(RootDatum, IntMatrix)> {
    let all: Vec<usize> = (0..rd.rank).collect();
    let cd = center_component_group(rd, &all);
    let factors = cd.group.invariant_factors();
    for g in subgroup_gens {
        if g.coords.len() != factors.len() {
            return Err(Error::InvalidInput(
                "subgroup generator has wrong coordinate length".into(),
            ));
        }
    }
    let n = rd.x_rank;
    if subgroup_gens.is_empty() {
        return Ok((rd.clone(), IntMatrix::identity(n)));
    }
    // Pairing between the torsion group and its dual: (g_i, g_j) = delta_ij
    // / d_i. X' = { x : sum_j class(x)_j * s_j / d_j is integral for every
    // subgroup generator s }.
    let exponent: BigInt = factors.iter().fold(BigInt::one(), |acc, d| acc.lcm(d));
    let mut cond = IntMatrix::zero(subgroup_gens.len(), n);
    for (row, s) in subgroup_gens.iter().enumerate() {
        for a in 0..n {
            let mut e_a = vec![BigInt::zero(); n];
            e_a[a] = BigInt::one();
            let c = IntMatrix::vec_mul(&e_a, &cd.v);
            let mut acc = BigInt::zero();
            for (j, d_j) in factors.iter().enumerate() {
                let pos = cd.torsion_positions[j];
                acc += &c[pos] * &s.coords[j] * (&exponent / d_j);
            }
            cond[(row, a)] = acc.mod_floor(&exponent);
        }
    }
    // Sublattice { x : cond · x ≡ 0 mod exponent }.
    let g = subgroup_gens.len();
    let mut block = IntMatrix::zero(g, n + g);
    for i in 0..g {
        for j in 0..n {
            block[(i, j)] = cond[(i, j)].clone();
        }
        block[(i, n + i)] = -exponent.clone();
    }
    let ker = integer_kernel(&block);
    let mut rows: Vec<Vec<BigInt>> = ker.iter().map(|v| v[..n].to_vec()).collect();
    for a in 0..n {
        let mut r = vec![BigInt::zero(); n];
        r[a] = exponent.clone();
        rows.push(r);
    }
    let basis = row_basis(&IntMatrix::from_bigint_rows(&rows));
    if basis.rows != n {
        return Err(Error::InvalidInput("quotient lattice is not full rank".into()));
    }
    // Re-express roots in the new basis; coroots move by the transpose.
    let mut new_roots = Vec::new();
    for alpha in &rd.simple_roots {
        let c = solve_left(&basis, alpha).ok_or_else(|| {
            Error::InvalidInput("a root is not trivial on the chosen central subgroup".into())
        })?;
        new_roots.push(c);
    }
    let new_coroots: Vec<Vec<BigInt>> = rd
        .simple_coroots
        .iter()
        .map(|y| basis.mul_vec(y))
        .collect();
    let out = RootDatum {
        ctype: rd.ctype.clone(),
        rank: rd.rank,
        x_rank: n,
        simple_roots: new_roots,
        simple_coroots: new_coroots,
    };
    Ok((out, basis))
}

/// Classification of a connected full subdiagram of a Cartan matrix.
///
/// Returns the family, the rank, and the nodes listed in the canonical
/// (Bourbaki) order for that family.
pub fn classify_connected(cartan: &IntMatrix, nodes: &[usize]) -> Result<(Family, usize, Vec<usize>)> {
    let n = nodes.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty node set".into()));
    }
    if n == 1 {
        return Ok((Family::A, 1, nodes.to_vec()));
    }
    let idx = |v: usize| nodes.iter().position(|&x| x == v).unwrap();
    let mult = |a: usize, b: usize| -> i64 {
        let p = &cartan[(a, b)] * &cartan[(b, a)];
        i64::try_from(&p).unwrap()
    };
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut triple: Option<(usize, usize)> = None;
    let mut doubles: Vec<(usize, usize)> = Vec::new();
    for (ai, &a) in nodes.iter().enumerate() {
        for &b in nodes.iter().skip(ai + 1) {
            let m = mult(a, b);
            if m == 0 {
                continue;
            }
            adj[idx(a)].push(idx(b));
            adj[idx(b)].push(idx(a));
            match m {
                1 => {}
                2 => doubles.push((a, b)),
                3 => triple = Some((a, b)),
                _ => {
                    return Err(Error::InvalidType(
                        "edge multiplicity outside finite type".into(),
                    ))
                }
            }
        }
    }
    // Connectivity check.
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::InvalidInput("node set is not connected".into()));
    }
    if let Some((a, b)) = triple {
        if n != 2 {
            return Err(Error::InvalidType("triple edge in rank > 2".into()));
        }
        // <alpha_i, alpha_j^vee> = -3 forces alpha_j short; order
        // [short, long] per Bourbaki G2.
        let (short, long) = if cartan[(a, b)] == BigInt::from(-3) {
            (b, a)
        } else {
            (a, b)
        };
        return Ok((Family::G, 2, vec![short, long]));
    }
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    if !branch.is_empty() {
        if branch.len() != 1 || !doubles.is_empty() || adj[branch[0]].len() != 3 {
            return Err(Error::InvalidType("diagram outside finite type".into()));
        }
        let b = branch[0];
        // Walk the three arms away from the branch node.
        let mut arms: Vec<Vec<usize>> = Vec::new();
        for &start in &adj[b] {
            let mut arm = vec![start];
            let mut prev = b;
            let mut cur = start;
            loop {
                let next: Vec<usize> =
                    adj[cur].iter().copied().filter(|&w| w != prev).collect();
                match next.as_slice() {
                    [] => break,
                    [w] => {
                        arm.push(*w);
                        prev = cur;
                        cur = *w;
                    }
                    _ => return Err(Error::InvalidType("second branch point".into())),
                }
            }
            arms.push(arm);
        }
        arms.sort_by_key(|a| (a.len(), nodes[a[0]]));
        let lens: Vec<usize> = arms.iter().map(|a| a.len()).collect();
        let node_of = |v: usize| nodes[v];
        match lens.as_slice() {
            [1, 1, m] => {
                // D_{m+3}: long arm far-to-near, branch node, then the two
                // tips by ascending original index.
                let rank = m + 3;
                let mut order: Vec<usize> =
                    arms[2].iter().rev().map(|&v| node_of(v)).collect();
                order.push(node_of(b));
                let mut tips = vec![node_of(arms[0][0]), node_of(arms[1][0])];
                tips.sort_unstable();
                order.extend(tips);
                Ok((Family::D, rank, order))
            }
            [1, 2, m] if (2..=4).contains(m) => {
                // E_{m+4}: [far of 2-arm, 1-arm, near of 2-arm, branch,
                // long arm near-to-far].
                let rank = m + 4;
                let order = vec![
                    node_of(arms[1][1]),
                    node_of(arms[0][0]),
                    node_of(arms[1][0]),
                    node_of(b),
                ]
                .into_iter()
                .chain(arms[2].iter().map(|&v| node_of(v)))
                .collect();
                Ok((Family::E, rank, order))
            }
            _ => Err(Error::InvalidType("branch arm profile outside finite type".into())),
        }
    } else {
        // A chain. Identify the two endpoints.
        let ends: Vec<usize> = (0..n).filter(|&v| adj[v].len() == 1).collect();
        if ends.len() != 2 {
            return Err(Error::InvalidType("chain does not have two ends".into()));
        }
        let walk = |from: usize| -> Vec<usize> {
            let mut path = vec![from];
            let mut prev = usize::MAX;
            let mut cur = from;
            while path.len() < n {
                let next = adj[cur]
                    .iter()
                    .copied()
                    .find(|&w| w != prev)
                    .expect("chain walk");
                path.push(next);
                prev = cur;
                cur = next;
            }
            path
        };
        match doubles.len() {
            0 => {
                let e0 = nodes[ends[0]].min(nodes[ends[1]]);
                let start = idx(e0);
                let order = walk(start).into_iter().map(|v| nodes[v]).collect();
                Ok((Family::A, n, order))
            }
            1 => {
                let (a, b) = doubles[0];
                let at_end = |v: usize| adj[idx(v)].len() == 1;
                if at_end(a) || at_end(b) {
                    // The pendant node of the double edge: short => B_n,
                    // long => C_n. <alpha_i, alpha_j^vee> = -2 forces
                    // alpha_j short.
                    let (pend, inner) = if at_end(a) { (a, b) } else { (b, a) };
                    let pend_short = cartan[(inner, pend)] == BigInt::from(-2);
                    let far = if nodes[ends[0]] == pend { ends[1] } else { ends[0] };
                    let order: Vec<usize> = walk(far).into_iter().map(|v| nodes[v]).collect();
                    if n == 2 {
                        // Rank 2: report B2 ordered [long, short].
                        let (long, short) = if pend_short { (inner, pend) } else { (pend, inner) };
                        return Ok((Family::B, 2, vec![long, short]));
                    }
                    if pend_short {
                        Ok((Family::B, n, order))
                    } else {
                        Ok((Family::C, n, order))
                    }
                } else {
                    // Double edge in the middle: F4.
                    if n != 4 {
                        return Err(Error::InvalidType(
                            "interior double edge outside F4".into(),
                        ));
                    }
                    // Long side first: <alpha_i, alpha_j^vee> = -2 with
                    // alpha_i long, alpha_j short.
                    let (long_mid, _short_mid) = if cartan[(a, b)] == BigInt::from(-2) {
                        (a, b)
                    } else {
                        (b, a)
                    };
                    let long_end = if adj[ends[0]].contains(&idx(long_mid)) {
                        ends[0]
                    } else {
                        ends[1]
                    };
                    let order = walk(long_end).into_iter().map(|v| nodes[v]).collect();
                    Ok((Family::F, 4, order))
                }
            }
            _ => Err(Error::InvalidType("more than one double edge".into())),
        }
    }
}

/// Connected components of the full subdiagram on `nodes`.
pub fn diagram_components(cartan: &IntMatrix, nodes: &[usize]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<usize> = nodes.to_vec();
    remaining.sort_unstable();
    let mut out = Vec::new();
    while let Some(&seed) = remaining.first() {
        let mut comp = vec![seed];
        let mut stack = vec![seed];
        remaining.retain(|&v| v != seed);
        while let Some(v) = stack.pop() {
            let linked: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&w| !cartan[(v, w)].is_zero())
                .collect();
            for w in linked {
                remaining.retain(|&x| x != w);
                comp.push(w);
                stack.push(w);
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Classify the full diagram of a Cartan matrix into a product type.
pub fn classify_cartan(cartan: &IntMatrix) -> Result<CartanType> {
    let nodes: Vec<usize> = (0..cartan.rows).collect();
    let mut comps = Vec::new();
    for comp in diagram_components(cartan, &nodes) {
        let (fam, rank, _) = classify_connected(cartan, &comp)?;
        comps.push((fam, rank));
    }
    CartanType::new(comps)
}

/// Check `|center| = connection index` convenience: the determinant of the
/// Cartan matrix equals the order of the full center component group.
pub fn connection_index(rd: &RootDatum) -> BigInt {
    let all: Vec<usize> = (0..rd.rank).collect();
    center_component_group(rd, &all).group.order()
}
