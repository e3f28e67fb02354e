use std::collections::BTreeMap;

use super::gf2::{gf2_rank, Gf2Matrix};
use super::spec::RegeneratingCodeSpec;
use crate::error::{Error, Result};
use crate::model::SystemParams;

/// Generator whose column `(node, symbol)` is the XOR of the listed
/// message bits (0-based).
fn generator_from_symbols(b: usize, nodes: &[Vec<Vec<usize>>]) -> Gf2Matrix {
    let alpha = nodes[0].len();
    let mut g = Gf2Matrix::zeros(b, nodes.len() * alpha);
    for (n, symbols) in nodes.iter().enumerate() {
        for (s, bits) in symbols.iter().enumerate() {
            for &bit in bits {
                g.flip(bit, n * alpha + s);
            }
        }
    }
    g
}

/// Rotates bit `group * width + offset` to the next group.
fn rotate(bits: &[usize], width: usize, steps: usize) -> Vec<usize> {
    bits.iter()
        .map(|&x| ((x / width + steps) % 4) * width + x % width)
        .collect()
}

/// Node 1's symbols rotated onto all four nodes; repair of node `j` by
/// helper `i` depends only on `(i - j) mod 4`.
fn rotated_code(
    k: usize,
    beta: usize,
    width: usize,
    node1: &[Vec<usize>],
    repair_by_offset: [&[&str]; 3],
) -> RegeneratingCodeSpec {
    let b = 4 * width;
    let nodes: Vec<Vec<Vec<usize>>> = (0..4)
        .map(|step| node1.iter().map(|bits| rotate(bits, width, step)).collect())
        .collect();
    let alpha = node1.len();
    let mut repair = BTreeMap::new();
    for j in 1..=4 {
        for i in (1..=4).filter(|&i| i != j) {
            let offset = (i + 4 - j) % 4;
            let rows = repair_by_offset[offset - 1];
            repair.insert(
                (i, j),
                Gf2Matrix::from_bitstrings(rows, alpha).expect("builtin repair rows"),
            );
        }
    }
    RegeneratingCodeSpec {
        params: SystemParams::new(k, 3).expect("builtin parameters"),
        b,
        alpha,
        beta,
        generator: generator_from_symbols(b, &nodes),
        repair,
        parity: None,
    }
}

/// The 4-bit code on four servers: `(x, z+t), (y, t+x), (z, x+y), (t, y+z)`.
///
/// Server 1 is repaired from `y`, `x+y` and `y+z+t`.
pub fn builtin_code_423() -> RegeneratingCodeSpec {
    // bits x, y, z, t = 0, 1, 2, 3
    rotated_code(2, 1, 1, &[vec![0], vec![2, 3]], [&["10"], &["01"], &["11"]])
}

/// The 8-bit code on four servers: `(x1, x2, z1+t2)` and its rotations.
///
/// Server 1 is repaired from `{y2, t1+x2}`, `{z1, x1+y2}` and `{t1, t2}`.
pub fn builtin_code_433() -> RegeneratingCodeSpec {
    // bits x1, x2, y1, y2, z1, z2, t1, t2 = 0..8
    rotated_code(
        3,
        2,
        2,
        &[vec![0], vec![1], vec![4, 7]],
        [&["010", "001"], &["100", "001"], &["100", "010"]],
    )
}

/// The congruence parity matrix: `H[r][c] = 1` iff `r ≡ c (mod d + 1)`.
pub fn congruence_parity(d: usize) -> Gf2Matrix {
    let side = d * (d + 1);
    let mut h = Gf2Matrix::zeros(side, side);
    for r in 0..side {
        for c in (r % (d + 1)..side).step_by(d + 1) {
            h.set(r, c, true);
        }
    }
    h
}

/// The `n = d + 1`, `k = d` code with `α = d`, `β = d - 1` and
/// `B = (d - 1)(d + 1)` cut out by [`congruence_parity`].
///
/// Helper `i` repairs node `j` by sending `H_{j,i}` applied to its
/// symbols, with `H_{j,i}` row-reduced to a basis.
pub fn build_congruence_family(d: usize) -> Result<RegeneratingCodeSpec> {
    if d < 3 {
        return Err(Error::ParameterRange(format!(
            "congruence family needs d >= 3, got {d}"
        )));
    }
    let n = d + 1;
    let h = congruence_parity(d);
    let generator = h.nullspace();
    let b = n * d - gf2_rank(&h);
    debug_assert_eq!(generator.rows(), b);
    let mut repair = BTreeMap::new();
    for j in 1..=n {
        for i in (1..=n).filter(|&i| i != j) {
            repair.insert((i, j), h.block(j - 1, i - 1, d, d).rref().0);
        }
    }
    Ok(RegeneratingCodeSpec {
        params: SystemParams::new(d, d)?,
        b,
        alpha: d,
        beta: d - 1,
        generator,
        repair,
        parity: Some(h),
    })
}
