//! Fractional Bernoulli sums: `α_{n,b}`, `β_M(n,b)` and decorated tree sums
//! `S_n(Γ)`, with Laurent-polynomiality certification in `n`.

use crate::error::{Error, Result};
use crate::exact::interp::{fit_laurent, fit_polynomial, LaurentFit};
use crate::exact::rat::{ri, Rat};
use crate::exact::{bernoulli_poly, root_of_unity, Cyc};
use crate::par::{self, Exec};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// `1/(ζ_n^b − 1)`, and `0` for `b ≡ 0`.
pub fn alpha(n: u32, b: i64) -> Cyc {
    if b.rem_euclid(n as i64) == 0 {
        return Cyc::zero();
    }
    (&root_of_unity(n, b) - &Cyc::one()).inv()
}

/// `Σ_{b=1}^{n−1} α_{n,b}^m`.
pub fn alpha_power_sum(n: u32, m: u32) -> Result<Rat> {
    let mut s = Cyc::zero();
    for b in 1..n as i64 {
        s = &s + &alpha(n, b).pow(m);
    }
    s.to_rat()
        .ok_or_else(|| Error::IrrationalResult(format!("power sum of alpha at n={n}, m={m}")))
}

/// Interpolates `n ↦ Σ_b α_{n,b}^m` as a polynomial of degree `≤ m+1`.
pub fn alpha_power_sum_polynomial(m: u32, fit: &[i64], holdout: &[i64]) -> Result<LaurentFit> {
    let f = |n: i64| alpha_power_sum(n as u32, m);
    fit_polynomial(&f, fit, holdout, m + 1)
}

fn bernoulli_product(ms: &[u32], x: &Rat) -> Rat {
    ms.iter().fold(Rat::one(), |acc, &m| acc * bernoulli_poly(m as usize, x))
}

/// `β_M(n, b) = Σ_{a=0}^{n−1} ζ_n^{ab} Π_{m∈M} B_m(a/n)`.
pub fn beta(ms: &[u32], n: u32, b: i64) -> Cyc {
    let nn = n as i64;
    let mut coords = vec![Rat::zero(); n as usize];
    for a in 0..nn {
        let x = Rat::new(a.into(), nn.into());
        coords[(a * b).rem_euclid(nn) as usize] += bernoulli_product(ms, &x);
    }
    Cyc::from_exponents(n, &coords)
}

/// `β_M(nc, bc)`.
pub fn beta_scaling(ms: &[u32], n: u32, b: i64, c: u32) -> Cyc {
    beta(ms, n * c, b * c as i64)
}

/// Certifies `c ↦ β_M(nc, bc)` as a Laurent polynomial in `c` (rational
/// values only, e.g. `b ≡ 0`). Pole order at most `ΣM`, positive degree at most 1.
pub fn beta_scaling_laurent(ms: &[u32], n: u32, b: i64, fit: &[i64], holdout: &[i64]) -> Result<LaurentFit> {
    let f = |c: i64| {
        beta_scaling(ms, n, b, c as u32)
            .to_rat()
            .ok_or_else(|| Error::IrrationalResult(format!("beta_{ms:?}({}, {})", n as i64 * c, b * c)))
    };
    fit_laurent(&f, fit, holdout, ms.iter().sum(), 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityInstance {
    pub identity: String,
    pub n: u32,
    pub detail: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub instances: Vec<IdentityInstance>,
}

impl IdentityReport {
    pub fn passed(&self) -> usize {
        self.instances.iter().filter(|i| i.ok).count()
    }

    pub fn all_ok(&self) -> bool {
        self.instances.iter().all(|i| i.ok)
    }
}

fn small_multisets() -> Vec<Vec<u32>> {
    let mut v = vec![vec![]];
    for a in 0..=4 {
        v.push(vec![a]);
        for b in a..=4 {
            v.push(vec![a, b]);
        }
    }
    v
}

/// Checks, for every `n ≤ n_max`, multisets with at most two entries `≤ 4`
/// and all residues:
/// the convolution `Σ_i β_M(n,a+i) β_N(n,b−i) = n β_{M⊔N}(n,a+b)`,
/// the doubling relation `β_M(2n,b) + β_M(2n,n+b) = 2β_M(n,b)`,
/// and `Σ_b β_M(n,b) = n Π B_m`.
pub fn beta_identities_check(n_max: u32, exec: Exec) -> Result<IdentityReport> {
    let sets = small_multisets();
    let mut jobs = Vec::new();
    for n in 1..=n_max {
        for i in 0..sets.len() {
            jobs.push((n, i));
        }
    }
    let chunks = par::map(exec, &jobs, |&(n, i)| {
        let m = &sets[i];
        let nn = n as i64;
        let row: Vec<Cyc> = (0..nn).map(|b| beta(m, n, b)).collect();
        let mut out = Vec::new();
        for nset in &sets {
            let other: Vec<Cyc> = (0..nn).map(|b| beta(nset, n, b)).collect();
            let mut joint = m.clone();
            joint.extend(nset);
            let rhs_row: Vec<Cyc> = (0..nn).map(|s| beta(&joint, n, s).scale(&ri(nn))).collect();
            for a in 0..nn {
                for b in 0..nn {
                    let mut lhs = Cyc::zero();
                    for i in 0..nn {
                        lhs = &lhs + &(&row[(a + i).rem_euclid(nn) as usize] * &other[(b - i).rem_euclid(nn) as usize]);
                    }
                    let ok = lhs == rhs_row[((a + b) % nn) as usize];
                    out.push(IdentityInstance {
                        identity: "convolution".into(),
                        n,
                        detail: format!("M={m:?} N={nset:?} a={a} b={b}"),
                        ok,
                    });
                }
            }
        }
        for b in 0..nn {
            let lhs = &beta(m, 2 * n, b) + &beta(m, 2 * n, nn + b);
            out.push(IdentityInstance {
                identity: "doubling".into(),
                n,
                detail: format!("M={m:?} b={b}"),
                ok: lhs == row[b as usize].scale(&ri(2)),
            });
        }
        let total = row.iter().fold(Cyc::zero(), |acc, x| &acc + x);
        let want = m.iter().fold(ri(nn), |acc, &k| acc * crate::exact::bernoulli_number(k as usize));
        out.push(IdentityInstance {
            identity: "residue sum".into(),
            n,
            detail: format!("M={m:?}"),
            ok: total == Cyc::from_rat(&want),
        });
        out
    });
    let report = IdentityReport { instances: chunks.into_iter().flatten().collect() };
    if let Some(bad) = report.instances.iter().find(|i| !i.ok) {
        return Err(Error::IdentityViolation(format!("{} at n={}: {}", bad.identity, bad.n, bad.detail)));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub u: u32,
    pub v: u32,
    pub decoration: Vec<u32>,
}

/// Tree whose edges carry multisets of Bernoulli indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecoratedTree {
    pub vertices: Vec<u32>,
    pub edges: Vec<TreeEdge>,
}

impl DecoratedTree {
    pub fn new(vertices: Vec<u32>, edges: Vec<TreeEdge>) -> Result<DecoratedTree> {
        let t = DecoratedTree { vertices, edges };
        t.validate()?;
        Ok(t)
    }

    /// Star with one centre and one leaf per decoration.
    pub fn star(decorations: &[Vec<u32>]) -> DecoratedTree {
        let k = decorations.len() as u32;
        let edges = decorations
            .iter()
            .enumerate()
            .map(|(i, d)| TreeEdge { u: 0, v: i as u32 + 1, decoration: d.clone() })
            .collect();
        DecoratedTree { vertices: (0..=k).collect(), edges }
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(*v) {
                return Err(Error::InvalidTree(format!("duplicate vertex {v}")));
            }
        }
        for e in &self.edges {
            if !seen.contains(&e.u) || !seen.contains(&e.v) {
                return Err(Error::InvalidTree(format!("edge {}-{} has an unknown endpoint", e.u, e.v)));
            }
            if e.u == e.v {
                return Err(Error::InvalidTree(format!("loop at vertex {}", e.u)));
            }
            if e.decoration.is_empty() {
                return Err(Error::InvalidTree(format!("edge {}-{} has an empty decoration", e.u, e.v)));
            }
        }
        if self.vertices.is_empty() {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        if self.edges.len() + 1 != self.vertices.len() {
            return Err(Error::InvalidTree("not a tree: |E| != |V| - 1".into()));
        }
        let adj = self.adjacency();
        let mut stack = vec![self.vertices[0]];
        let mut reached = std::collections::BTreeSet::from([self.vertices[0]]);
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[&v] {
                if reached.insert(w) {
                    stack.push(w);
                }
            }
        }
        if reached.len() != self.vertices.len() {
            return Err(Error::InvalidTree("not connected".into()));
        }
        Ok(())
    }

    /// `vertex -> [(neighbour, edge index)]`.
    pub fn adjacency(&self) -> BTreeMap<u32, Vec<(u32, usize)>> {
        let mut adj: BTreeMap<u32, Vec<(u32, usize)>> = self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for (i, e) in self.edges.iter().enumerate() {
            adj.get_mut(&e.u).unwrap().push((e.v, i));
            adj.get_mut(&e.v).unwrap().push((e.u, i));
        }
        adj
    }

    /// `(pole order, positive degree)` bounds used for interpolation in `n`.
    pub fn degree_bounds(&self) -> (u32, u32) {
        let internal = self.adjacency().values().filter(|nb| nb.len() >= 2).count();
        let free = (self.edges.len() - internal) as u32;
        (self.weight().saturating_sub(free), free)
    }

    /// Total Bernoulli weight `Σ_e Σ_{m∈M_e} m`.
    pub fn weight(&self) -> u32 {
        self.edges.iter().flat_map(|e| &e.decoration).sum()
    }
}

fn edge_weights(e: &TreeEdge, n: u32) -> Vec<Rat> {
    (0..n as i64)
        .map(|a| bernoulli_product(&e.decoration, &Rat::new(a.into(), (n as i64).into())))
        .collect()
}

fn convolve(x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    let n = x.len();
    let mut out = vec![Rat::zero(); n];
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() {
                out[(i + j) % n] += xi * yj;
            }
        }
    }
    out
}

/// `S_n(Γ)`: sum over edge labels `a_e ∈ Z_n` of `Π_e Π_{m∈M_e} B_m(a_e/n)`
/// subject to `Σ_{e∋v} a_e ≡ 0` at every vertex of valence at least two.
/// Evaluated by a rooted convolution over `Z_n`.
pub fn tree_sum(t: &DecoratedTree, n: u32) -> Result<Rat> {
    t.validate()?;
    if n == 0 {
        return Err(Error::ParamTooSmall("tree sum needs n >= 1".into()));
    }
    let adj = t.adjacency();
    if t.edges.is_empty() {
        return Ok(Rat::one());
    }
    let root = *adj.iter().find(|(_, nb)| nb.len() >= 2).map(|(v, _)| v).unwrap_or(&t.vertices[0]);
    // f[s] for the subtree hanging below `v` through edge `e` labelled s
    fn below(adj: &BTreeMap<u32, Vec<(u32, usize)>>, t: &DecoratedTree, n: u32, v: u32, parent: u32, e: usize) -> Vec<Rat> {
        let w = edge_weights(&t.edges[e], n);
        let children: Vec<&(u32, usize)> = adj[&v].iter().filter(|(x, _)| *x != parent).collect();
        if children.is_empty() {
            return w;
        }
        let mut g = vec![Rat::zero(); n as usize];
        g[0] = Rat::one();
        for &&(c, ce) in &children {
            g = convolve(&g, &below(adj, t, n, c, v, ce));
        }
        (0..n as usize).map(|s| &w[s] * &g[(n as usize - s) % n as usize]).collect()
    }
    let kids = &adj[&root];
    if kids.len() == 1 {
        let (c, e) = kids[0];
        return Ok(below(&adj, t, n, c, root, e).into_iter().sum());
    }
    let mut g = vec![Rat::zero(); n as usize];
    g[0] = Rat::one();
    for &(c, e) in kids {
        g = convolve(&g, &below(&adj, t, n, c, root, e));
    }
    Ok(g[0].clone())
}

/// Same sum through the character expansion of each vertex constraint:
/// `n^{−I} Σ_{b_v} Π_e β_{M_e}(n, b_{u(e)} + b_{w(e)})` over the `I` vertices
/// of valence at least two, with `b = 0` on leaves. Exponential in `I`.
pub fn tree_sum_fourier(t: &DecoratedTree, n: u32) -> Result<Rat> {
    t.validate()?;
    let adj = t.adjacency();
    let internal: Vec<u32> = adj.iter().filter(|(_, nb)| nb.len() >= 2).map(|(v, _)| *v).collect();
    let pos: BTreeMap<u32, usize> = internal.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let tables: Vec<Vec<Cyc>> = t
        .edges
        .iter()
        .map(|e| (0..n as i64).map(|b| beta(&e.decoration, n, b)).collect())
        .collect();
    let mut total = Cyc::zero();
    let mut bs = vec![0i64; internal.len()];
    loop {
        let mut term = Cyc::one();
        for (i, e) in t.edges.iter().enumerate() {
            let s = pos.get(&e.u).map_or(0, |&p| bs[p]) + pos.get(&e.v).map_or(0, |&p| bs[p]);
            term = &term * &tables[i][(s % n as i64) as usize];
            if term.is_zero() {
                break;
            }
        }
        total = &total + &term;
        let mut k = 0;
        while k < bs.len() {
            bs[k] += 1;
            if bs[k] < n as i64 {
                break;
            }
            bs[k] = 0;
            k += 1;
        }
        if k == bs.len() {
            break;
        }
    }
    let scale = Rat::one() / num_traits::pow(ri(n as i64), internal.len());
    total
        .scale(&scale)
        .to_rat()
        .ok_or_else(|| Error::IrrationalResult(format!("tree sum at n={n}")))
}

/// Certifies `n ↦ S_n(Γ)` as a Laurent polynomial. With `d = |E| − #{v : val(v) ≥ 2}`
/// free labels, the positive degree is at most `d` and the pole order at most `ΣΣm − d`.
pub fn tree_sum_polynomiality(t: &DecoratedTree, fit: &[i64], holdout: &[i64]) -> Result<LaurentFit> {
    t.validate()?;
    let (pole, deg) = t.degree_bounds();
    let f = |n: i64| tree_sum(t, n as u32);
    fit_laurent(&f, fit, holdout, pole, deg)
}
