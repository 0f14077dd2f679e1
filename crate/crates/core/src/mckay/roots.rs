use crate::error::{Error, Result};

/// A positive root, by ε-coordinates and by coefficients over the simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub eps: Vec<i32>,
    pub coeffs: Vec<u32>,
}

/// Positive roots of `D_n` (Bourbaki labelling) or `A_{N−1}`, with the
/// irreducible attached to each simple-root node.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub rank: u32,
    pub roots: Vec<Root>,
    /// Coefficients of the highest root.
    pub highest: Vec<u32>,
    pub node_irreps: Vec<String>,
}

impl RootSystem {
    pub fn simple_root(&self, node: usize) -> &Root {
        self.roots
            .iter()
            .find(|r| r.coeffs.iter().enumerate().all(|(k, &c)| c == (k == node) as u32))
            .expect("simple roots are positive roots")
    }
}

/// Simple-root coordinates of `v = Σ v_i ε_i` for `α_i = ε_i − ε_{i+1}` (`i < n`)
/// and `α_n = ε_{n−1} + ε_n`.
fn d_coeffs(v: &[i32]) -> Vec<u32> {
    let n = v.len();
    let mut c = vec![0i32; n];
    let mut s = 0;
    for i in 0..n - 2 {
        s += v[i];
        c[i] = s;
    }
    let (a, b) = (v[n - 2], v[n - 1]);
    c[n - 2] = (s + a - b) / 2;
    c[n - 1] = (s + a + b) / 2;
    c.into_iter().map(|x| u32::try_from(x).expect("positive root")).collect()
}

/// The `n(n−1)` positive roots of `D_n`, nodes labelled
/// `ψ₂, ρ₁, …, ρ_{n−3}, ψ₃, ψ₄`.
pub fn positive_roots(n: u32) -> Result<RootSystem> {
    if n < 4 {
        return Err(Error::ParamTooSmall(format!("D_n root system needs n >= 4, got {n}")));
    }
    let nu = n as usize;
    let mut roots = Vec::new();
    for i in 0..nu {
        for j in i + 1..nu {
            for sign in [-1, 1] {
                let mut eps = vec![0; nu];
                eps[i] = 1;
                eps[j] = sign;
                roots.push(Root { coeffs: d_coeffs(&eps), eps });
            }
        }
    }
    let mut node_irreps = vec!["psi2".to_string()];
    node_irreps.extend((1..=n - 3).map(|k| format!("rho{k}")));
    node_irreps.extend(["psi3".to_string(), "psi4".to_string()]);
    let mut highest = vec![2; nu];
    highest[0] = 1;
    highest[nu - 2] = 1;
    highest[nu - 1] = 1;
    Ok(RootSystem { rank: n, roots, highest, node_irreps })
}

/// Positive roots `α_i + … + α_j` of `A_{N−1}`, node `k` labelled `σ_k`.
pub fn type_a_roots(order: u32) -> RootSystem {
    let r = order as usize - 1;
    let mut roots = Vec::new();
    for i in 0..r {
        for j in i..r {
            let mut coeffs = vec![0; r];
            for c in &mut coeffs[i..=j] {
                *c = 1;
            }
            let mut eps = vec![0; r + 1];
            eps[i] = 1;
            eps[j + 1] = -1;
            roots.push(Root { eps, coeffs });
        }
    }
    RootSystem {
        rank: r as u32,
        roots,
        highest: vec![1; r],
        node_irreps: (1..order).map(|k| format!("sigma{k}")).collect(),
    }
}
