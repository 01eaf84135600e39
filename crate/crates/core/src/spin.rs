//! Product-operator basis for two spin-1/2 nuclei I and S.
//!
//! Basis ordering is fixed as |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩ with the I spin first,
//! so `iz = diag(1/2, 1/2, -1/2, -1/2)` and `sz = diag(1/2, -1/2, 1/2, -1/2)`.
//! The convention is pinned by tests; every other module builds on it.

use crate::matrix::{Complex64, Matrix4};

/// The full single- and two-spin operator set used by the simulator.
///
/// All operators are dimensionless 4×4 matrices in the product basis above;
/// `izsz` is the coupling operator `2·Iz·Sz`, stored premultiplied because
/// the dipolar Hamiltonian always uses it in that combination.
#[derive(Debug, Clone, Copy)]
pub struct SpinOperatorSet {
    pub ix: Matrix4,
    pub iy: Matrix4,
    pub iz: Matrix4,
    pub iplus: Matrix4,
    pub iminus: Matrix4,
    pub sx: Matrix4,
    pub sy: Matrix4,
    pub sz: Matrix4,
    pub splus: Matrix4,
    pub sminus: Matrix4,
    /// `2 Iz Sz`
    pub izsz: Matrix4,
    pub identity: Matrix4,
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn im(x: f64) -> Complex64 {
    Complex64::new(0.0, x)
}

/// Build the operator set.
///
/// I-spin operators act on the first tensor factor (pairing basis states
/// 0↔2 and 1↔3), S-spin operators on the second (0↔1 and 2↔3).
pub fn build_operators() -> SpinOperatorSet {
    let z = re(0.0);
    let h = re(0.5);

    let mut iz = Matrix4::zeros();
    let mut sz = Matrix4::zeros();
    for (i, (mi, ms)) in [(0.5, 0.5), (0.5, -0.5), (-0.5, 0.5), (-0.5, -0.5)]
        .into_iter()
        .enumerate()
    {
        iz[(i, i)] = re(mi);
        sz[(i, i)] = re(ms);
    }

    let ix = Matrix4::from_rows([
        [z, z, h, z],
        [z, z, z, h],
        [h, z, z, z],
        [z, h, z, z],
    ]);
    let iy = Matrix4::from_rows([
        [z, z, im(-0.5), z],
        [z, z, z, im(-0.5)],
        [im(0.5), z, z, z],
        [z, im(0.5), z, z],
    ]);
    let sx = Matrix4::from_rows([
        [z, h, z, z],
        [h, z, z, z],
        [z, z, z, h],
        [z, z, h, z],
    ]);
    let sy = Matrix4::from_rows([
        [z, im(-0.5), z, z],
        [im(0.5), z, z, z],
        [z, z, z, im(-0.5)],
        [z, z, im(0.5), z],
    ]);

    // raising/lowering operators, exactly ix ± i·iy
    let iplus = complex_combination(&ix, &iy);
    let iminus = complex_combination_conj(&ix, &iy);
    let splus = complex_combination(&sx, &sy);
    let sminus = complex_combination_conj(&sx, &sy);

    let izsz = (iz * sz).scaled(2.0);

    SpinOperatorSet {
        ix,
        iy,
        iz,
        iplus,
        iminus,
        sx,
        sy,
        sz,
        splus,
        sminus,
        izsz,
        identity: Matrix4::identity(),
    }
}

/// `a + i·b`, entrywise.
fn complex_combination(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut out = Matrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            out[(i, j)] = a[(i, j)] + Complex64::new(0.0, 1.0) * b[(i, j)];
        }
    }
    out
}

/// `a - i·b`, entrywise.
fn complex_combination_conj(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut out = Matrix4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            out[(i, j)] = a[(i, j)] - Complex64::new(0.0, 1.0) * b[(i, j)];
        }
    }
    out
}
