//! Finitely generated abelian groups presented as `Z/d_1 + ... + Z/d_s + Z^f`
//! with the `d_i` forming a divisibility chain.
//!
//! A presentation remembers how its abstract generators sit inside a named
//! ambient lattice (vertex basis, edge basis, dual basis, ...) and can reduce
//! arbitrary ambient vectors to coordinates, which is what turns kernel and
//! cokernel computations into answerable questions about group elements.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::smith::{smith, SmithDecomposition};
use super::LinalgError;

/// Order of a group element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(BigInt),
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => write!(f, "infinite"),
        }
    }
}

/// Coordinates of an element: torsion components normalized to `[0, d_i)`,
/// followed by free components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub torsion: Vec<BigInt>,
    pub free: Vec<BigInt>,
}

impl GroupElement {
    pub fn is_zero(&self) -> bool {
        self.torsion.iter().all(Zero::is_zero) && self.free.iter().all(Zero::is_zero)
    }
}

/// A named generator together with an ambient expression.
#[derive(Clone, Debug)]
pub struct Generator {
    pub label: String,
    pub expression: Vec<BigInt>,
    pub order: Order,
}

#[derive(Debug)]
enum ReduceKind {
    /// Quotient of the ambient lattice; reduction is total.
    Quotient,
    /// Subgroup of the ambient lattice cut out as the kernel of a matrix;
    /// reduction is defined only on vectors the matrix kills.
    Subgroup { constraint: IntMatrix },
}

/// `Z/d_1 + ... + Z/d_s + Z^f` with generators expressed in an ambient basis.
#[derive(Debug)]
pub struct AbelianGroupPresentation {
    ambient_names: Vec<String>,
    torsion: Vec<BigInt>,
    free_rank: usize,
    generators: Vec<Generator>,
    /// Rows mapping an ambient vector to raw (pre-normalization) coordinates:
    /// first the torsion rows, then the free rows.
    reduce_rows: IntMatrix,
    kind: ReduceKind,
}

impl AbelianGroupPresentation {
    /// Presents the cokernel of `a` (the ambient lattice is the row space,
    /// one name per row).
    pub fn cokernel(a: &IntMatrix, ambient_names: &[String]) -> Result<Self, LinalgError> {
        if ambient_names.len() != a.rows() {
            return Err(LinalgError::DimensionMismatch {
                expected: a.rows(),
                found: ambient_names.len(),
            });
        }
        let dec = smith(a);
        let diag = dec.diagonal();
        let mut torsion_rows = Vec::new();
        let mut torsion = Vec::new();
        let mut free_rows = Vec::new();
        for i in 0..a.rows() {
            match diag.get(i) {
                Some(d) if d.is_one() => {}
                Some(d) if d.is_zero() => free_rows.push(i),
                Some(d) => {
                    torsion_rows.push(i);
                    torsion.push(d.clone());
                }
                None => free_rows.push(i),
            }
        }
        Ok(Self::assemble(
            ambient_names.to_vec(),
            torsion,
            torsion_rows,
            free_rows,
            &dec,
            ReduceKind::Quotient,
        ))
    }

    /// Presents the kernel of `a` as a free group on the Smith basis
    /// (the ambient lattice is the column space, one name per column).
    pub fn kernel(a: &IntMatrix, ambient_names: &[String]) -> Result<Self, LinalgError> {
        if ambient_names.len() != a.cols() {
            return Err(LinalgError::DimensionMismatch {
                expected: a.cols(),
                found: ambient_names.len(),
            });
        }
        let dec = smith(a);
        let diag_len = a.rows().min(a.cols());
        let free_cols: Vec<usize> = (0..a.cols())
            .filter(|&j| j >= diag_len || dec.d.get(j, j).is_zero())
            .collect();

        let reduce_rows = IntMatrix::from_fn(free_cols.len(), a.cols(), |r, c| {
            dec.v_inv.get(free_cols[r], c).clone()
        });
        let generators = free_cols
            .iter()
            .enumerate()
            .map(|(idx, &j)| Generator {
                label: format!("g{}", idx + 1),
                expression: dec.v.column(j),
                order: Order::Infinite,
            })
            .collect();
        Ok(AbelianGroupPresentation {
            ambient_names: ambient_names.to_vec(),
            torsion: Vec::new(),
            free_rank: free_cols.len(),
            generators,
            reduce_rows,
            kind: ReduceKind::Subgroup {
                constraint: a.clone(),
            },
        })
    }

    fn assemble(
        ambient_names: Vec<String>,
        torsion: Vec<BigInt>,
        torsion_rows: Vec<usize>,
        free_rows: Vec<usize>,
        dec: &SmithDecomposition,
        kind: ReduceKind,
    ) -> Self {
        let ambient = ambient_names.len();
        let picked: Vec<usize> = torsion_rows
            .iter()
            .chain(free_rows.iter())
            .copied()
            .collect();
        let reduce_rows = IntMatrix::from_fn(picked.len(), ambient, |r, c| {
            dec.u.get(picked[r], c).clone()
        });
        let mut generators = Vec::new();
        for (idx, &row) in torsion_rows.iter().enumerate() {
            generators.push(Generator {
                label: format!("t{}", idx + 1),
                expression: dec.u_inv.column(row),
                order: Order::Finite(torsion[idx].clone()),
            });
        }
        for (idx, &row) in free_rows.iter().enumerate() {
            generators.push(Generator {
                label: format!("g{}", idx + 1),
                expression: dec.u_inv.column(row),
                order: Order::Infinite,
            });
        }
        AbelianGroupPresentation {
            ambient_names,
            torsion,
            free_rank: free_rows.len(),
            generators,
            reduce_rows,
            kind,
        }
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn ambient_names(&self) -> &[String] {
        &self.ambient_names
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// Total number of elements, when finite.
    pub fn group_order(&self) -> Order {
        if self.free_rank > 0 {
            Order::Infinite
        } else {
            Order::Finite(self.torsion.iter().product())
        }
    }

    /// Coordinates of an ambient vector. Errors when the vector does not lie
    /// in the subgroup (kernel presentations) or has the wrong length.
    pub fn reduce(&self, x: &[BigInt]) -> Result<GroupElement, LinalgError> {
        if x.len() != self.ambient_names.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.ambient_names.len(),
                found: x.len(),
            });
        }
        if let ReduceKind::Subgroup { constraint } = &self.kind {
            let image = constraint.apply(x)?;
            if image.iter().any(|e| !e.is_zero()) {
                return Err(LinalgError::NotInSubgroup);
            }
        }
        let raw = self.reduce_rows.apply(x)?;
        let torsion = raw[..self.torsion.len()]
            .iter()
            .zip(&self.torsion)
            .map(|(value, modulus)| value.mod_floor(modulus))
            .collect();
        let free = raw[self.torsion.len()..].to_vec();
        Ok(GroupElement { torsion, free })
    }

    /// Sum of two reduced elements.
    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let torsion = a
            .torsion
            .iter()
            .zip(&b.torsion)
            .zip(&self.torsion)
            .map(|((x, y), modulus)| (x + y).mod_floor(modulus))
            .collect();
        let free = a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect();
        GroupElement { torsion, free }
    }

    /// Least `k >= 1` with `k * x = 0` in the group, or `Infinite`.
    pub fn element_order(&self, x: &[BigInt]) -> Result<Order, LinalgError> {
        let e = self.reduce(x)?;
        if e.free.iter().any(|c| !c.is_zero()) {
            return Ok(Order::Infinite);
        }
        let mut order = BigInt::one();
        for (coord, modulus) in e.torsion.iter().zip(&self.torsion) {
            let k = modulus / coord.gcd(modulus);
            order = order.lcm(&k);
        }
        Ok(Order::Finite(order))
    }

    /// `"Z^f + Z/d1 + Z/d2 + ..."`, or `"0"` for the trivial group.
    pub fn isomorphism_class(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            f => parts.push(format!("Z^{f}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    /// Renders an ambient vector against the ambient names,
    /// e.g. `"v1 - 2*v3"`.
    pub fn format_ambient(&self, x: &[BigInt]) -> String {
        format_combination(&self.ambient_names, x)
    }
}

/// Linear-combination pretty printer shared by presentations and reports.
pub fn format_combination(names: &[String], coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (name, c) in names.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if mag.is_one() {
            out.push_str(name);
        } else {
            out.push_str(&format!("{mag}*{name}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Prime-power factorization for torsion orders small enough to factor by
/// trial division; `None` when the order is out of reach.
pub fn primary_decomposition(d: &BigInt) -> Option<Vec<(u64, u32)>> {
    let mut n = u64::try_from(d).ok()?;
    if n < 2 {
        return Some(Vec::new());
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut exp = 0;
            while n % p == 0 {
                n /= p;
                exp += 1;
            }
            out.push((p, exp));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    Some(out)
}
