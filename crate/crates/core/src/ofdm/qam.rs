//! Gray-mapped square QAM with unit average energy.
//!
//! 4QAM puts one bit per axis (`0 -> -1`, `1 -> +1`, scaled by `1/sqrt(2)`).
//! 16QAM puts two bits per axis with levels `00 -> -3`, `01 -> -1`,
//! `11 -> +1`, `10 -> +3`, scaled by `1/sqrt(10)`. The in-phase axis takes
//! the leading bits.

use num_complex::Complex64;

use crate::error::{config, data, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QamOrder {
    Qam4,
    Qam16,
}

impl QamOrder {
    pub fn from_order(m: u32) -> Result<Self> {
        match m {
            4 => Ok(QamOrder::Qam4),
            16 => Ok(QamOrder::Qam16),
            _ => config(format!("qam_order must be one of {{4, 16}}, got {m}")),
        }
    }

    pub fn order(self) -> u32 {
        match self {
            QamOrder::Qam4 => 4,
            QamOrder::Qam16 => 16,
        }
    }

    pub fn bits_per_symbol(self) -> usize {
        match self {
            QamOrder::Qam4 => 2,
            QamOrder::Qam16 => 4,
        }
    }

    fn bits_per_axis(self) -> usize {
        self.bits_per_symbol() / 2
    }

    fn scale(self) -> f64 {
        match self {
            QamOrder::Qam4 => std::f64::consts::FRAC_1_SQRT_2,
            QamOrder::Qam16 => 1.0 / 10f64.sqrt(),
        }
    }

    /// All constellation points, indexed by their bit pattern (MSB first).
    pub fn constellation(self) -> Vec<Complex64> {
        let k = self.bits_per_symbol();
        (0..1usize << k)
            .map(|v| {
                let bits: Vec<bool> = (0..k).rev().map(|i| (v >> i) & 1 == 1).collect();
                map_one(&bits, self)
            })
            .collect()
    }
}

fn axis_level(bits: &[bool]) -> f64 {
    match bits {
        [b] => {
            if *b {
                1.0
            } else {
                -1.0
            }
        }
        [false, false] => -3.0,
        [false, true] => -1.0,
        [true, true] => 1.0,
        [true, false] => 3.0,
        _ => unreachable!("axis carries one or two bits"),
    }
}

fn map_one(bits: &[bool], order: QamOrder) -> Complex64 {
    let h = order.bits_per_axis();
    Complex64::new(axis_level(&bits[..h]), axis_level(&bits[h..])) * order.scale()
}

pub fn qam_map(bits: &[bool], order: QamOrder) -> Result<Vec<Complex64>> {
    let k = order.bits_per_symbol();
    if bits.len() % k != 0 {
        return data(format!(
            "{} bits is not a multiple of {k} ({}QAM)",
            bits.len(),
            order.order()
        ));
    }
    Ok(bits.chunks_exact(k).map(|c| map_one(c, order)).collect())
}

fn decide_axis(y: f64, order: QamOrder, out: &mut Vec<bool>) {
    match order {
        QamOrder::Qam4 => out.push(y > 0.0),
        QamOrder::Qam16 => {
            let y = y * 10f64.sqrt();
            out.push(y > 0.0);
            out.push(y.abs() < 2.0);
        }
    }
}

/// Hard minimum-distance decisions, per axis.
pub fn qam_demap(symbols: &[Complex64], order: QamOrder) -> Vec<bool> {
    let mut out = Vec::with_capacity(symbols.len() * order.bits_per_symbol());
    for z in symbols {
        decide_axis(z.re, order, &mut out);
        decide_axis(z.im, order, &mut out);
    }
    out
}
