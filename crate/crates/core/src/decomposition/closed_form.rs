use crate::error::{Error, Result};
use crate::operator::OperatorKind;
use crate::sequence::SequenceSpec;

use super::{Decomposition, JacobiBlock};

/// Antitree decomposition: one block on the spherically symmetric
/// functions plus, for each sphere with `s_n > 1`, a scalar block of
/// multiplicity `s_n - 1` for the zero-sum functions on `S_n`.
///
/// With `s_{-1} = 0` and `s_{depth+1}` the outward size, the Laplacian
/// block has `a_n = sqrt(s_n s_{n+1})`, `b_n = s_{n-1} + s_{n+1}`. The
/// adjacency block has the same `a` and `b = 0`; the normalized one has
/// `a_n / sqrt(b_n b_{n+1})` and `b = 1`.
pub fn antitree_closed_form(s: &SequenceSpec, depth: usize, kind: OperatorKind) -> Result<Decomposition> {
    let sizes = s.take(depth + 2)?;
    if sizes[0] != 1 {
        return Err(Error::InvalidSequence(format!("antitree needs s_0 = 1, got {}", sizes[0])));
    }
    if let Some(n) = sizes[..=depth].iter().position(|&x| x == 0) {
        return Err(Error::InvalidSequence(format!("antitree sphere {n} is empty")));
    }
    let sf: Vec<f64> = sizes.iter().map(|&x| x as f64).collect();
    let degree: Vec<f64> = (0..=depth)
        .map(|n| if n == 0 { 0.0 } else { sf[n - 1] } + sf[n + 1])
        .collect();
    let a_lap: Vec<f64> = (0..depth).map(|n| (sf[n] * sf[n + 1]).sqrt()).collect();
    if kind == OperatorKind::Normalized {
        if let Some(n) = degree.iter().position(|&d| d == 0.0) {
            return Err(Error::ZeroDegree { sphere: n, index: 0 });
        }
    }
    // Zero-sum functions on S_n are eigenvectors with eigenvalue b_n.
    let (a, b) = match kind {
        OperatorKind::Laplacian => (a_lap, degree),
        OperatorKind::Adjacency => (a_lap, vec![0.0; depth + 1]),
        OperatorKind::Normalized => (
            a_lap
                .iter()
                .enumerate()
                .map(|(n, a)| a / (degree[n] * degree[n + 1]).sqrt())
                .collect(),
            vec![1.0; depth + 1],
        ),
    };
    let mut blocks = Vec::new();
    for (n, &size) in sizes.iter().enumerate().take(depth + 1).skip(1) {
        if size > 1 {
            blocks.push(JacobiBlock::scalar(n, b[n], size - 1));
        }
    }
    blocks.insert(
        0,
        JacobiBlock {
            start_sphere: 0,
            seeds: Vec::new(),
            a,
            b,
            multiplicity: 1,
        },
    );
    Ok(Decomposition { kind, depth, blocks })
}

fn branching(k: &SequenceSpec, depth: usize) -> Result<Vec<u64>> {
    let ks = k.take(depth + 2)?;
    if let Some(n) = (1..=depth + 1).find(|&n| ks[n] == 0) {
        return Err(Error::InvalidSequence(format!("branching k_{n} must be >= 1")));
    }
    Ok(ks)
}

/// Block `l` of the Laplacian of the tree with complete spheres, truncated
/// at `depth`: spheres `l..=depth`, `a_i = sqrt(k_{n+1})` and
/// `b_i = k_{n+1} + 1 + v_n` at sphere `n = l + i`, where
/// `v_n = gamma_n * s_n` for `l >= 1`; block 0 has `b_0 = k_1` and no
/// potential. The multiplicity is `s_l - s_{l-1}` (1 for `l = 0`).
pub fn tree_cs_block(k: &SequenceSpec, gamma: &SequenceSpec, l: usize, depth: usize) -> Result<JacobiBlock> {
    if l > depth {
        return Err(Error::OutOfRange(format!("block {l} beyond depth {depth}")));
    }
    let ks = branching(k, depth)?;
    let kf = |n: usize| ks[n] as f64;
    let mut size = 1.0f64;
    let mut sizes = vec![1.0];
    for n in 1..=depth {
        size *= kf(n);
        sizes.push(size);
    }
    let a = (l..depth).map(|n| kf(n + 1).sqrt()).collect();
    let mut b = Vec::with_capacity(depth - l + 1);
    for (n, &size) in sizes.iter().enumerate().skip(l) {
        if n == 0 {
            b.push(kf(1));
            continue;
        }
        let mut value = kf(n + 1) + 1.0;
        if l >= 1 {
            let g = gamma.value_at(n)?;
            if g > 1 {
                return Err(Error::InvalidSequence(format!("gamma_{n} = {g} is not a bit")));
            }
            value += g as f64 * size;
        }
        b.push(value);
    }
    let multiplicity = if l == 0 {
        1
    } else {
        let prod = |m: usize| {
            ks[1..=m]
                .iter()
                .try_fold(1u64, |acc, &x| acc.checked_mul(x))
                .ok_or(Error::Overflow)
        };
        prod(l)? - prod(l - 1)?
    };
    Ok(JacobiBlock {
        start_sphere: l,
        seeds: Vec::new(),
        a,
        b,
        multiplicity,
    })
}

/// All blocks `l = 0..=depth` with nonzero multiplicity.
pub fn tree_cs_closed_form(k: &SequenceSpec, gamma: &SequenceSpec, depth: usize) -> Result<Decomposition> {
    let mut blocks = Vec::new();
    for l in 0..=depth {
        let block = tree_cs_block(k, gamma, l, depth)?;
        if block.multiplicity > 0 {
            blocks.push(block);
        }
    }
    Ok(Decomposition {
        kind: OperatorKind::Laplacian,
        depth,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> SequenceSpec {
        s.parse().unwrap()
    }

    #[test]
    fn antitree_laplacian_coefficients() {
        let d = antitree_closed_form(&spec("1;2,3"), 4, OperatorKind::Laplacian).unwrap();
        let main = &d.blocks[0];
        assert!((main.a[0] - 2f64.sqrt()).abs() < 1e-15);
        assert!((main.a[1] - 6f64.sqrt()).abs() < 1e-15);
        assert_eq!(&main.b[..2], &[2.0, 4.0]);
        assert_eq!(d.blocks[1], JacobiBlock::scalar(1, 4.0, 1));
        assert_eq!(d.dimension(), Some(1 + 2 + 3 + 2 + 3));
    }

    #[test]
    fn four_cycle_blocks() {
        let d = antitree_closed_form(&spec("1,2,1,0;"), 2, OperatorKind::Laplacian).unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert_eq!(d.blocks[0].b, vec![2.0, 2.0, 2.0]);
        assert_eq!(d.blocks[1], JacobiBlock::scalar(1, 2.0, 1));
    }

    #[test]
    fn normalized_antitree() {
        let d = antitree_closed_form(&spec("1,2,3;2,3"), 3, OperatorKind::Normalized).unwrap();
        assert!((d.blocks[0].a[1] - (6.0f64 / 16.0).sqrt()).abs() < 1e-15);
        assert!(d.blocks.iter().all(|b| b.b.iter().all(|&x| x == 1.0)));
        let adj = antitree_closed_form(&spec("1,2,3;2,3"), 3, OperatorKind::Adjacency).unwrap();
        assert!(adj.blocks.iter().all(|b| b.b.iter().all(|&x| x == 0.0)));
    }

    #[test]
    fn tree_cs_coefficients() {
        let d = tree_cs_closed_form(&spec("2"), &spec("1"), 3).unwrap();
        let b0 = &d.blocks[0];
        assert_eq!(b0.b, vec![2.0, 3.0, 3.0, 3.0]);
        assert!(b0.a.iter().all(|&a| (a - 2f64.sqrt()).abs() < 1e-15));
        let mults: Vec<u64> = d.blocks.iter().map(|b| b.multiplicity).collect();
        assert_eq!(mults, vec![1, 1, 2, 4]);
        // v = (0, 2, 4, 8)
        assert_eq!(d.blocks[1].b, vec![3.0 + 2.0, 3.0 + 4.0, 3.0 + 8.0]);
        assert_eq!(d.blocks[3].b, vec![3.0 + 8.0]);
        assert_eq!(d.dimension(), Some(15));
    }

    #[test]
    fn plain_tree_blocks_are_shifts() {
        let d = tree_cs_closed_form(&spec("2"), &spec("0"), 4).unwrap();
        for (l, blk) in d.blocks.iter().enumerate().skip(1) {
            assert_eq!(blk.b[..], d.blocks[0].b[l..]);
            assert_eq!(blk.a[..], d.blocks[0].a[l..]);
        }
    }

    #[test]
    fn sparse_construction_has_one_orthogonal_block() {
        let gamma = crate::sequence::sparse_gamma_spec(2, 40).unwrap();
        let d = tree_cs_closed_form(&spec("1,2;1"), &gamma, 30).unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert_eq!(d.blocks[1].multiplicity, 1);
        // gamma_1 = 1: b at sphere 1 is k_2 + 1 + 2
        assert_eq!(d.blocks[1].b[0], 4.0);
        assert_eq!(d.blocks[1].b[1], 2.0);
    }

    #[test]
    fn exhausted_sequence() {
        assert!(matches!(
            antitree_closed_form(&spec("1,2;"), 3, OperatorKind::Laplacian),
            Err(Error::SequenceExhausted { .. })
        ));
    }
}
