//! Multipartite pure states and the ket-sum text format.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{approx_proportional, Scalar, Tensor, ToleranceConfig, ONE, ZERO};

/// N-party pure state of local dimension `d`, stored unnormalized.
///
/// Equality of states is up to a global nonzero scalar; see [`PureState::same_ray`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    dim: usize,
    amplitudes: Tensor,
}

impl PureState {
    pub fn new(dim: usize, amplitudes: Tensor) -> Result<Self> {
        if amplitudes.order() == 0 {
            return Err(Error::ShapeMismatch(vec![dim], Vec::new()));
        }
        if let Some(&bad) = amplitudes.shape().iter().find(|&&d| d != dim) {
            return Err(Error::DimensionMismatch(dim, bad));
        }
        if amplitudes.is_zero() {
            return Err(Error::ZeroState);
        }
        Ok(Self { dim, amplitudes })
    }

    /// State from a tensor whose indices all share one dimension.
    pub fn from_tensor(amplitudes: Tensor) -> Result<Self> {
        let dim = amplitudes.shape().first().copied().ok_or(Error::ShapeMismatch(vec![1], Vec::new()))?;
        Self::new(dim, amplitudes)
    }

    /// Computational basis state `|digits>`.
    pub fn basis(dim: usize, digits: &[usize]) -> Result<Self> {
        let mut t = Tensor::zeros(vec![dim; digits.len()]);
        for &k in digits {
            if k >= dim {
                return Err(Error::DigitOutOfRange { digit: k, dim });
            }
        }
        t.set(digits, ONE);
        Self::new(dim, t)
    }

    /// Sum of basis kets with unit coefficients.
    pub fn from_kets(dim: usize, kets: &[&[usize]]) -> Result<Self> {
        let n = kets.first().map_or(0, |k| k.len());
        let mut t = Tensor::zeros(vec![dim; n.max(1)]);
        for ket in kets {
            if ket.len() != n {
                return Err(Error::InconsistentParties(n, ket.len()));
            }
            if let Some(&digit) = ket.iter().find(|&&k| k >= dim) {
                return Err(Error::DigitOutOfRange { digit, dim });
            }
            let v = t.get(ket);
            t.set(ket, v + ONE);
        }
        Self::new(dim, t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parties(&self) -> usize {
        self.amplitudes.order()
    }

    pub fn amplitudes(&self) -> &Tensor {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Tensor {
        self.amplitudes
    }

    pub fn amplitude(&self, digits: &[usize]) -> Scalar {
        self.amplitudes.get(digits)
    }

    /// `d × d^(N-1)` matrix with `party` as the row index and the remaining
    /// parties, in order, as the column index.
    pub fn matricize(&self, party: usize) -> Result<Tensor> {
        let n = self.parties();
        if party >= n {
            return Err(Error::IndexOutOfRange { index: party, order: n });
        }
        let axes: Vec<usize> = std::iter::once(party).chain((0..n).filter(|&k| k != party)).collect();
        self.amplitudes.permute(&axes)?.matricize(1)
    }

    /// Scalar `c` with `self ≈ c·other`, if any.
    pub fn ratio(&self, other: &Self, tol: &ToleranceConfig) -> Result<Option<Scalar>> {
        approx_proportional(&self.amplitudes, &other.amplitudes, tol)
    }

    /// Equality up to a global nonzero scalar.
    pub fn same_ray(&self, other: &Self, tol: &ToleranceConfig) -> bool {
        self.amplitudes.shape() == other.amplitudes.shape()
            && matches!(self.ratio(other, tol), Ok(Some(c)) if c != ZERO)
    }

    /// Ket-sum rendering, e.g. `|000>+|111>` or `2|01>-(0+1i)|10>`.
    ///
    /// Amplitudes below `1e-12` times the largest one are dropped.
    pub fn to_ket_string(&self) -> String {
        let cutoff = 1e-12 * self.amplitudes.max_abs();
        let n = self.parties();
        let strides = self.amplitudes.strides();
        let mut out = String::new();
        for (flat, &amp) in self.amplitudes.data().iter().enumerate() {
            if amp.norm() <= cutoff {
                continue;
            }
            let digits: String = (0..n)
                .map(|k| char::from_digit(((flat / strides[k]) % self.dim) as u32, 36).unwrap_or('?'))
                .collect();
            let (sign, coeff) = format_coefficient(amp);
            if !out.is_empty() || sign == '-' {
                out.push(sign);
            }
            let _ = write!(out, "{coeff}|{digits}>");
        }
        out
    }
}

/// Splits an amplitude into a leading sign and a coefficient prefix
/// (empty when the magnitude is exactly one).
fn format_coefficient(c: Scalar) -> (char, String) {
    if c.im == 0.0 {
        let sign = if c.re < 0.0 { '-' } else { '+' };
        let mag = c.re.abs();
        let text = if mag == 1.0 { String::new() } else { format!("{mag}") };
        (sign, text)
    } else if c.re == 0.0 && c.im < 0.0 {
        ('-', format!("(0+{}i)", -c.im))
    } else {
        let op = if c.im < 0.0 { '-' } else { '+' };
        ('+', format!("({}{op}{}i)", c.re, c.im.abs()))
    }
}

/// Parses a ket-sum expression such as `2|01> - (0+1i)|10>`.
///
/// Coefficients are a real literal or `(a+bi)` / `(a-bi)`; a missing
/// coefficient means 1. Repeated kets accumulate. Whitespace is ignored.
pub fn parse_ket(text: &str, dim: usize) -> Result<PureState> {
    let mut p = KetParser { src: text.as_bytes(), pos: 0 };
    let terms = p.terms()?;
    let parties = terms.first().map_or(0, |t| t.1.len());
    if terms.is_empty() {
        return Err(Error::Syntax { pos: p.pos, message: "expected at least one ket".into() });
    }
    let mut t = Tensor::zeros(vec![dim; parties]);
    for (coeff, digits, _) in &terms {
        if digits.len() != parties {
            return Err(Error::InconsistentParties(parties, digits.len()));
        }
        if let Some(&digit) = digits.iter().find(|&&k| k >= dim) {
            return Err(Error::DigitOutOfRange { digit, dim });
        }
        let v = t.get(digits);
        t.set(digits, v + coeff);
    }
    PureState::new(dim, t)
}

/// Largest digit used in a ket expression, for picking a default dimension.
pub fn max_ket_digit(text: &str) -> Result<usize> {
    let mut p = KetParser { src: text.as_bytes(), pos: 0 };
    let terms = p.terms()?;
    Ok(terms.iter().flat_map(|t| t.1.iter().copied()).max().unwrap_or(0))
}

struct KetParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl KetParser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, message: &str) -> Error {
        Error::Syntax { pos: self.pos, message: message.to_string() }
    }

    /// Terms as `(coefficient, digits, start position)`.
    fn terms(&mut self) -> Result<Vec<(Scalar, Vec<usize>, usize)>> {
        let mut out = Vec::new();
        let mut first = true;
        while let Some(c) = self.peek() {
            let start = self.pos;
            let mut sign = 1.0;
            match c {
                b'+' | b'-' => {
                    if c == b'-' {
                        sign = -1.0;
                    }
                    self.pos += 1;
                }
                _ if !first => return Err(self.err("expected `+` or `-` between terms")),
                _ => {}
            }
            first = false;
            let coeff = self.coefficient()? * sign;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            }
            let digits = self.ket()?;
            out.push((coeff, digits, start));
        }
        Ok(out)
    }

    fn coefficient(&mut self) -> Result<Scalar> {
        match self.peek() {
            Some(b'|') => Ok(ONE),
            Some(b'(') => {
                let start = self.pos;
                let close = self.src[start..]
                    .iter()
                    .position(|&b| b == b')')
                    .ok_or_else(|| self.err("unclosed `(` in coefficient"))?;
                let inner = std::str::from_utf8(&self.src[start + 1..start + close]).unwrap_or("");
                self.pos = start + close + 1;
                parse_complex(inner).ok_or_else(|| Error::MalformedCoefficient(inner.trim().to_string()))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(|&b| b != b'|' && b != b'*' && !b.is_ascii_whitespace()) {
                    self.pos += 1;
                }
                let lit = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                parse_real(lit).map(|x| Scalar::new(x, 0.0)).ok_or_else(|| Error::MalformedCoefficient(lit.to_string()))
            }
            Some(_) => Err(self.err("expected a coefficient or `|`")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn ket(&mut self) -> Result<Vec<usize>> {
        if self.peek() != Some(b'|') {
            return Err(self.err("expected `|`"));
        }
        self.pos += 1;
        let mut digits = Vec::new();
        loop {
            match self.peek() {
                Some(b'>') => {
                    self.pos += 1;
                    break;
                }
                Some(c) if c.is_ascii_digit() => {
                    digits.push((c - b'0') as usize);
                    self.pos += 1;
                }
                Some(_) => return Err(self.err("expected a digit or `>` inside ket")),
                None => return Err(self.err("unclosed ket")),
            }
        }
        if digits.is_empty() {
            return Err(self.err("empty ket"));
        }
        Ok(digits)
    }
}

fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    if s.is_empty() || s.eq_ignore_ascii_case("nan") || s.to_ascii_lowercase().contains("inf") {
        return None;
    }
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// `a`, `bi`, `a+bi`, `a-bi` with optional leading sign; whitespace ignored.
pub(crate) fn parse_complex(s: &str) -> Option<Scalar> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    if let Some(body) = s.strip_suffix('i') {
        // Split at the last sign that is not the leading one or part of an exponent.
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        match split {
            Some(k) => {
                let re = parse_real(&body[..k])?;
                let im_text = &body[k..];
                let im = match im_text {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => parse_real(im_text)?,
                };
                Some(Scalar::new(re, im))
            }
            None => {
                let im = match body {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    _ => parse_real(body)?,
                };
                Some(Scalar::new(0.0, im))
            }
        }
    } else {
        parse_real(&s).map(|x| Scalar::new(x, 0.0))
    }
}
