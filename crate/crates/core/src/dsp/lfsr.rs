//! Maximal-length sequences from a Fibonacci LFSR.

use crate::error::{config, Result};

/// A primitive polynomial over GF(2), `x^degree + sum_{e in terms} x^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimitivePolynomial {
    pub degree: u32,
    /// Exponents of the non-leading terms, constant term included.
    pub terms: &'static [u32],
}

/// One canonical primitive polynomial per degree, 2 through 16.
pub const PRIMITIVE_POLYNOMIALS: [PrimitivePolynomial; 15] = [
    PrimitivePolynomial { degree: 2, terms: &[1, 0] },
    PrimitivePolynomial { degree: 3, terms: &[1, 0] },
    PrimitivePolynomial { degree: 4, terms: &[1, 0] },
    PrimitivePolynomial { degree: 5, terms: &[2, 0] },
    PrimitivePolynomial { degree: 6, terms: &[1, 0] },
    PrimitivePolynomial { degree: 7, terms: &[1, 0] },
    PrimitivePolynomial { degree: 8, terms: &[4, 3, 2, 0] },
    PrimitivePolynomial { degree: 9, terms: &[4, 0] },
    PrimitivePolynomial { degree: 10, terms: &[3, 0] },
    PrimitivePolynomial { degree: 11, terms: &[2, 0] },
    PrimitivePolynomial { degree: 12, terms: &[6, 4, 1, 0] },
    PrimitivePolynomial { degree: 13, terms: &[4, 3, 1, 0] },
    PrimitivePolynomial { degree: 14, terms: &[10, 6, 1, 0] },
    PrimitivePolynomial { degree: 15, terms: &[1, 0] },
    PrimitivePolynomial { degree: 16, terms: &[5, 3, 2, 0] },
];

/// Canonical polynomial for `degree`, if tabulated.
pub fn primitive_polynomial(degree: u32) -> Option<&'static PrimitivePolynomial> {
    PRIMITIVE_POLYNOMIALS.iter().find(|p| p.degree == degree)
}

/// One period (`2^degree - 1` bits) of the m-sequence generated by the
/// polynomial with non-leading exponents `terms`, which must match the
/// table entry for `degree`.
///
/// Bit `i` of `seed_state` is the `i`-th output bit, so the first `degree`
/// outputs reproduce the seed.
pub fn lfsr_msequence(degree: u32, terms: &[u32], seed_state: u32) -> Result<Vec<bool>> {
    if !(2..=16).contains(&degree) {
        return config(format!("m-sequence degree must be in 2..=16, got {degree}"));
    }
    let poly = primitive_polynomial(degree).expect("table covers 2..=16");
    let mut wanted: Vec<u32> = terms.to_vec();
    wanted.sort_unstable_by(|a, b| b.cmp(a));
    if wanted != poly.terms {
        return config(format!(
            "polynomial terms {terms:?} for degree {degree} are not in the primitive table"
        ));
    }
    let width_mask = (1u32 << degree) - 1;
    let state0 = seed_state & width_mask;
    if state0 == 0 || seed_state & !width_mask != 0 {
        return config(format!(
            "seed state {seed_state:#b} must be nonzero and fit in {degree} bits"
        ));
    }
    let tap_mask = poly.terms.iter().fold(0u32, |acc, &e| acc | (1 << e));
    let len = (1usize << degree) - 1;
    let mut state = state0;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(state & 1 == 1);
        let feedback = (state & tap_mask).count_ones() & 1;
        state = (state >> 1) | (feedback << (degree - 1));
    }
    Ok(out)
}

/// m-sequence from the canonical polynomial with the all-ones seed.
pub fn msequence(degree: u32) -> Result<Vec<bool>> {
    let poly = primitive_polynomial(degree)
        .ok_or_else(|| crate::Error::Config(format!("no primitive polynomial for degree {degree}")))?;
    lfsr_msequence(degree, poly.terms, (1u32 << degree) - 1)
}

/// `true -> +1`, `false -> -1`.
pub fn bipolar(bits: &[bool]) -> Vec<f64> {
    bits.iter().map(|&b| if b { 1.0 } else { -1.0 }).collect()
}
