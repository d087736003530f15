use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mpnum::{pi, Complex, Scalar};
use crate::serde_util::floats_as_strings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    RootsOfUnity,
    PsiReal,
    Chebyshev,
}

/// Ordered evaluation points with the residue each one came from.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet<T> {
    /// `n` for cyclotomic and `ψ` nodes, `N` for Chebyshev nodes.
    pub defining: u64,
    pub kind: NodeKind,
    pub nodes: Vec<T>,
    /// Residue (or Chebyshev index) of each node.
    pub provenance: Vec<u64>,
    /// Residues in range that were skipped.
    pub excluded: Vec<u64>,
    pub precision: u32,
}

impl<T> NodeSet<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

impl NodeSet<Float> {
    /// Nodes lifted into a matrix scalar type.
    pub fn lift<S: Scalar>(&self) -> Vec<S> {
        self.nodes.iter().map(|x| S::from_real(x.clone())).collect()
    }

    /// Multiset equals its own negation, up to `tol`.
    pub fn is_symmetric(&self, tol: &Float) -> bool {
        let mut sorted = self.nodes.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("nodes are finite"));
        let n = sorted.len();
        (0..n).all(|i| {
            let s = Float::with_val(self.precision, &sorted[i] + &sorted[n - 1 - i]);
            s.abs() <= *tol
        })
    }

    /// Every node multiplied by `factor`.
    pub fn scaled(&self, factor: u32) -> Self {
        let mut out = self.clone();
        for x in &mut out.nodes {
            *x *= factor;
        }
        out
    }
}

impl Serialize for NodeSet<Float> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            defining: u64,
            kind: NodeKind,
            #[serde(serialize_with = "floats_as_strings")]
            nodes: &'a [Float],
            provenance: &'a [u64],
            excluded: &'a [u64],
            precision_bits: u32,
        }
        Repr {
            defining: self.defining,
            kind: self.kind,
            nodes: &self.nodes,
            provenance: &self.provenance,
            excluded: &self.excluded,
            precision_bits: self.precision,
        }
        .serialize(s)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `cos(t·π)` for rational `t = num/den`.
fn cos_pi_fraction(num: u64, den: u64, prec: u32) -> Float {
    let angle = pi(prec) * Float::with_val(prec, num) / Float::with_val(prec, den);
    angle.cos()
}

/// `x_k = cos((2k-1)π / 2N)` for `k = 1..N`, strictly decreasing.
pub fn chebyshev_nodes(count: usize, prec: u32) -> Result<NodeSet<Float>> {
    if count == 0 {
        return Err(Error::invalid("Chebyshev node count must be >= 1"));
    }
    let big_n = count as u64;
    let mut nodes = Vec::with_capacity(count);
    for k in 1..=big_n {
        // Exact zero in the middle for odd N.
        if 2 * k - 1 == big_n {
            nodes.push(Float::new(prec));
        } else {
            nodes.push(cos_pi_fraction(2 * k - 1, 2 * big_n, prec));
        }
    }
    Ok(NodeSet {
        defining: big_n,
        kind: NodeKind::Chebyshev,
        nodes,
        provenance: (1..=big_n).collect(),
        excluded: Vec::new(),
        precision: prec,
    })
}

/// `ψ_k = 2cos(2kπ/n)` over units `k` in `1..n/2`, increasing `k`.
///
/// `excluded` lists the non-unit residues of that range.
pub fn psi_nodes(n: u64, prec: u32) -> Result<NodeSet<Float>> {
    if n < 5 {
        return Err(Error::invalid(format!("ψ nodes need n >= 5, got {n}")));
    }
    let mut nodes = Vec::new();
    let mut provenance = Vec::new();
    let mut excluded = Vec::new();
    for k in 1..=n / 2 {
        if gcd(k, n) != 1 {
            excluded.push(k);
            continue;
        }
        let mut x = cos_pi_fraction(2 * k, n, prec);
        x *= 2u32;
        nodes.push(x);
        provenance.push(k);
    }
    Ok(NodeSet {
        defining: n,
        kind: NodeKind::PsiReal,
        nodes,
        provenance,
        excluded,
        precision: prec,
    })
}

/// Primitive n-th roots of unity `e^{2πik/n}`, `gcd(k, n) = 1`, increasing `k`.
pub fn roots_of_unity(n: u64, prec: u32) -> Result<NodeSet<Complex>> {
    if n == 0 {
        return Err(Error::invalid("roots of unity need n >= 1"));
    }
    let mut nodes = Vec::new();
    let mut provenance = Vec::new();
    let mut excluded = Vec::new();
    for k in 1..=n {
        if gcd(k, n) != 1 {
            excluded.push(k);
            continue;
        }
        let theta = pi(prec) * Float::with_val(prec, 2 * k) / Float::with_val(prec, n);
        nodes.push(Complex::from_angle(&theta));
        provenance.push(k);
    }
    Ok(NodeSet {
        defining: n,
        kind: NodeKind::RootsOfUnity,
        nodes,
        provenance,
        excluded,
        precision: prec,
    })
}

/// Nodes `ψ_{2k-1}` for `k = 1..p` in the row order used by `Q_{4p}`:
/// rows `1` and `(p+1)/2` swapped, so the zero node comes first.
///
/// Provenance holds the odd residue `2k - 1`; residue `p` is the zero node.
pub fn q4p_row_nodes(p: u64, prec: u32) -> Result<NodeSet<Float>> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::invalid(format!("expected an odd prime p >= 3, got {p}")));
    }
    let mut order: Vec<u64> = (1..=p).collect();
    let mid = p.div_ceil(2) as usize;
    order.swap(0, mid - 1);
    let nodes = order
        .iter()
        .map(|&k| {
            if 2 * k - 1 == p {
                Float::new(prec)
            } else {
                let mut x = cos_pi_fraction(2 * k - 1, 2 * p, prec);
                x *= 2u32;
                x
            }
        })
        .collect();
    Ok(NodeSet {
        defining: 4 * p,
        kind: NodeKind::PsiReal,
        nodes,
        provenance: order.iter().map(|&k| 2 * k - 1).collect(),
        excluded: Vec::new(),
        precision: prec,
    })
}

/// The `p - 1` nonzero `ψ` nodes of conductor `4p`, in `Q_{4p}` row order
/// (rows `2..p` of [`q4p_row_nodes`]). Residue `p` is recorded as excluded.
pub fn retained_nodes(p: u64, prec: u32) -> Result<NodeSet<Float>> {
    let mut all = q4p_row_nodes(p, prec)?;
    all.nodes.remove(0);
    let zero = all.provenance.remove(0);
    all.excluded.push(zero);
    Ok(all)
}
