//! Arithmetic in GF(2^m) for m in {8, 16}.
//!
//! Elements are stored as plain `u16` values. A [`Field`] owns the log/antilog
//! tables (and, for m = 8, a full product table) built once from a
//! [`FieldSpec`]; every operation afterwards is a pure table lookup.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Default reduction polynomial for GF(2^8): x^8 + x^4 + x^3 + x^2 + 1.
pub const POLY_GF256: u32 = 0x11D;
/// Default reduction polynomial for GF(2^16): x^16 + x^12 + x^3 + x + 1.
pub const POLY_GF65536: u32 = 0x1100B;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum GaloisError {
    #[error("unsupported field width m = {0} (expected 8 or 16)")]
    UnsupportedWidth(u8),
    #[error("reduction polynomial {poly:#x} does not have degree {m}")]
    WrongDegree { m: u8, poly: u32 },
    #[error("reduction polynomial {0:#x} is reducible over GF(2)")]
    Reducible(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("value {value} is not an element of a field of size {q}")]
    OutOfRange { value: u32, q: u32 },
}

/// Parameters that define GF(2^m).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    m: u8,
    reduction_poly: u32,
}

impl FieldSpec {
    /// Validates `m` and checks that `reduction_poly` is irreducible of degree `m`.
    pub fn new(m: u8, reduction_poly: u32) -> Result<Self, GaloisError> {
        if m != 8 && m != 16 {
            return Err(GaloisError::UnsupportedWidth(m));
        }
        if poly_degree(reduction_poly) != Some(u32::from(m)) {
            return Err(GaloisError::WrongDegree {
                m,
                poly: reduction_poly,
            });
        }
        if !is_irreducible(reduction_poly) {
            return Err(GaloisError::Reducible(reduction_poly));
        }
        Ok(Self { m, reduction_poly })
    }

    pub fn gf256() -> Self {
        Self {
            m: 8,
            reduction_poly: POLY_GF256,
        }
    }

    pub fn gf65536() -> Self {
        Self {
            m: 16,
            reduction_poly: POLY_GF65536,
        }
    }

    /// Default spec for a bit width.
    pub fn with_width(m: u8) -> Result<Self, GaloisError> {
        match m {
            8 => Ok(Self::gf256()),
            16 => Ok(Self::gf65536()),
            _ => Err(GaloisError::UnsupportedWidth(m)),
        }
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    pub fn reduction_poly(&self) -> u32 {
        self.reduction_poly
    }

    /// Number of field elements, 2^m.
    pub fn q(&self) -> u32 {
        1 << self.m
    }

    /// Bytes needed to store one element.
    pub fn element_bytes(&self) -> usize {
        usize::from(self.m / 8)
    }
}

/// An element of GF(2^m); the value is always below q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[repr(transparent)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    pub fn value(self) -> u16 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// GF(2^m) with precomputed tables. Immutable once built.
#[derive(Clone)]
pub struct Field {
    spec: FieldSpec,
    /// log[x] for x != 0; log[0] is unused.
    log: Vec<u16>,
    /// exp[i] = g^i for i in [0, 2(q-1)), doubled so log sums need no reduction.
    exp: Vec<u16>,
    /// Full product table, row-major; only for m = 8.
    mul_table: Vec<u16>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field").field("spec", &self.spec).finish()
    }
}

impl Field {
    pub fn new(spec: FieldSpec) -> Self {
        let q = spec.q() as usize;
        let order = q - 1;
        let generator = (2..q as u32)
            .find(|&g| multiplicative_order(g, spec.reduction_poly) == order)
            .expect("irreducible polynomial always admits a primitive element");

        let mut log = vec![0u16; q];
        let mut exp = vec![0u16; 2 * order];
        let mut x = 1u32;
        for i in 0..order {
            exp[i] = x as u16;
            exp[i + order] = x as u16;
            log[x as usize] = i as u16;
            x = clmul_mod(x, generator, spec.reduction_poly);
        }

        let mut field = Self {
            spec,
            log,
            exp,
            mul_table: Vec::new(),
        };
        if spec.m == 8 {
            let mut table = vec![0u16; q * q];
            for a in 1..q {
                for b in 1..q {
                    table[a * q + b] = field.mul_log(a as u16, b as u16);
                }
            }
            field.mul_table = table;
        }
        field
    }

    pub fn gf256() -> Self {
        Self::new(FieldSpec::gf256())
    }

    pub fn gf65536() -> Self {
        Self::new(FieldSpec::gf65536())
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn q(&self) -> u32 {
        self.spec.q()
    }

    pub fn element(&self, value: u32) -> Result<FieldElement, GaloisError> {
        if value < self.q() {
            Ok(FieldElement(value as u16))
        } else {
            Err(GaloisError::OutOfRange {
                value,
                q: self.q(),
            })
        }
    }

    /// Wraps a raw value, masking it into range.
    pub fn element_wrapping(&self, value: u32) -> FieldElement {
        FieldElement((value & (self.q() - 1)) as u16)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul_raw(a.0, b.0))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GaloisError> {
        if a.0 == 0 {
            return Err(GaloisError::ZeroInverse);
        }
        let order = self.q() as usize - 1;
        let l = self.log[a.0 as usize] as usize;
        Ok(FieldElement(self.exp[(order - l) % order]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GaloisError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> FieldElement {
        if e == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let order = (self.q() - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElement(self.exp[((l * (e % order)) % order) as usize])
    }

    /// Wraps a value already known to be in range.
    #[inline]
    pub(crate) fn raw_element(v: u16) -> FieldElement {
        FieldElement(v)
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u16, b: u16) -> u16 {
        if self.spec.m == 8 {
            self.mul_table[((a as usize) << 8) | b as usize]
        } else {
            self.mul_log(a, b)
        }
    }

    #[inline]
    fn mul_log(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
        }
    }

    /// `dst[i] += c * src[i]` over the field.
    pub fn mul_add_slice(&self, dst: &mut [u16], src: &[u16], c: FieldElement) {
        debug_assert_eq!(dst.len(), src.len());
        match c.0 {
            0 => {}
            1 => {
                for (d, s) in dst.iter_mut().zip(src) {
                    *d ^= *s;
                }
            }
            c if self.spec.m == 8 => {
                let row = &self.mul_table[(c as usize) << 8..((c as usize) + 1) << 8];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d ^= row[*s as usize];
                }
            }
            c => {
                let lc = self.log[c as usize] as usize;
                for (d, s) in dst.iter_mut().zip(src) {
                    if *s != 0 {
                        *d ^= self.exp[self.log[*s as usize] as usize + lc];
                    }
                }
            }
        }
    }

    /// `buf[i] *= c` over the field.
    pub fn scale_slice(&self, buf: &mut [u16], c: FieldElement) {
        match c.0 {
            1 => {}
            0 => buf.iter_mut().for_each(|x| *x = 0),
            c => {
                for x in buf.iter_mut() {
                    *x = self.mul_raw(*x, c);
                }
            }
        }
    }

    /// Decodes little-endian symbol bytes into field elements.
    pub fn bytes_to_elements(&self, bytes: &[u8]) -> Vec<u16> {
        match self.spec.m {
            8 => bytes.iter().map(|&b| u16::from(b)).collect(),
            _ => bytes
                .chunks_exact(2)
                .map(|c| u16::from_le_bytes([c[0], c[1]]))
                .collect(),
        }
    }

    /// Inverse of [`Field::bytes_to_elements`].
    pub fn elements_to_bytes(&self, elements: &[u16]) -> Vec<u8> {
        match self.spec.m {
            8 => elements.iter().map(|&e| e as u8).collect(),
            _ => elements.iter().flat_map(|e| e.to_le_bytes()).collect(),
        }
    }
}

/// Carry-less multiply then reduce; used only while building tables.
fn clmul_mod(a: u32, b: u32, poly: u32) -> u32 {
    let deg = poly_degree(poly).unwrap_or(0);
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a >> deg & 1 != 0 {
            a ^= poly;
        }
    }
    acc
}

fn multiplicative_order(g: u32, poly: u32) -> usize {
    let mut x = g;
    let mut n = 1;
    while x != 1 {
        x = clmul_mod(x, g, poly);
        n += 1;
        if x == 0 || x == g {
            return 0;
        }
    }
    n
}

fn poly_degree(p: u32) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(31 - p.leading_zeros())
    }
}

/// Remainder of polynomial division over GF(2).
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = poly_degree(b).expect("nonzero divisor");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Trial division by every polynomial of degree 1..=deg/2.
fn is_irreducible(p: u32) -> bool {
    let Some(deg) = poly_degree(p) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    let max = deg / 2;
    (2u32..(1u32 << (max + 1))).all(|d| poly_rem(p, d) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Shift-and-XOR reference multiply, written independently of the tables.
    fn naive_mul(a: u32, b: u32, poly: u32, m: u32) -> u32 {
        let mut product = 0u64;
        for i in 0..m {
            if b >> i & 1 == 1 {
                product ^= (a as u64) << i;
            }
        }
        for bit in (m..2 * m).rev() {
            if product >> bit & 1 == 1 {
                product ^= (poly as u64) << (bit - m);
            }
        }
        product as u32
    }

    #[test]
    fn add_examples() {
        let f = Field::gf256();
        let e = |v| f.element(v).unwrap();
        assert_eq!(f.add(e(0x00), e(0x5A)), e(0x5A));
        assert_eq!(f.add(e(0x5A), e(0x5A)), e(0x00));
        assert_eq!(f.add(e(0x53), e(0xCA)), e(0x99));
    }

    #[test]
    fn mul_examples() {
        let f = Field::gf256();
        let e = |v| f.element(v).unwrap();
        assert_eq!(f.mul(e(0x02), e(0x80)), e(0x1D));
        assert_eq!(naive_mul(0x02, 0x80, 0x11D, 8), 0x1D);
        // Frozen from naive_mul(0x53, 0xCA, 0x11D, 8).
        assert_eq!(naive_mul(0x53, 0xCA, 0x11D, 8), 0x8F);
        assert_eq!(f.mul(e(0x53), e(0xCA)), e(0x8F));
        for x in 0..256 {
            assert_eq!(f.mul(e(x), FieldElement::ONE), e(x));
            assert_eq!(f.mul(e(x), FieldElement::ZERO), FieldElement::ZERO);
        }
    }

    #[test]
    fn inv_examples() {
        let f = Field::gf256();
        let e = |v| f.element(v).unwrap();
        assert_eq!(f.inv(FieldElement::ONE).unwrap(), FieldElement::ONE);
        let oracle = (1..256u32)
            .find(|&b| naive_mul(0x02, b, 0x11D, 8) == 1)
            .unwrap();
        assert_eq!(oracle, 0x8E);
        assert_eq!(f.inv(e(0x02)).unwrap(), e(0x8E));
        assert_eq!(f.inv(FieldElement::ZERO), Err(GaloisError::ZeroInverse));
    }

    #[test]
    fn inverses_exhaustive_gf65536() {
        let f = Field::gf65536();
        for a in 1..65536u32 {
            let a = f.element(a).unwrap();
            assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn gf65536_matches_naive_on_sampled_pairs() {
        let f = Field::gf65536();
        // xorshift, deterministic
        let mut s = 0x9E37_79B9_7F4A_7C15u64;
        for _ in 0..200_000 {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            let a = (s & 0xFFFF) as u32;
            let b = (s >> 16 & 0xFFFF) as u32;
            let got = f.mul(f.element(a).unwrap(), f.element(b).unwrap()).value() as u32;
            assert_eq!(got, naive_mul(a, b, POLY_GF65536, 16));
        }
    }

    #[test]
    fn spec_validation() {
        assert!(FieldSpec::new(8, 0x11D).is_ok());
        assert!(FieldSpec::new(16, 0x1100B).is_ok());
        // AES polynomial: irreducible but x is not primitive.
        let aes = Field::new(FieldSpec::new(8, 0x11B).unwrap());
        for a in 1..256 {
            let a = aes.element(a).unwrap();
            assert_eq!(aes.mul(a, aes.inv(a).unwrap()), FieldElement::ONE);
            for b in [3u32, 0x53, 0xCA] {
                assert_eq!(
                    aes.mul(a, aes.element(b).unwrap()).value() as u32,
                    naive_mul(a.value() as u32, b, 0x11B, 8)
                );
            }
        }
        assert_eq!(
            FieldSpec::new(4, 0x13),
            Err(GaloisError::UnsupportedWidth(4))
        );
        assert!(matches!(
            FieldSpec::new(8, 0x1100B),
            Err(GaloisError::WrongDegree { .. })
        ));
        // (x^4 + x + 1)^2 = x^8 + x^2 + 1
        assert_eq!(FieldSpec::new(8, 0x105), Err(GaloisError::Reducible(0x105)));
    }

    #[test]
    fn slice_kernels_match_scalar() {
        for f in [Field::gf256(), Field::gf65536()] {
            let q = f.q();
            let src: Vec<u16> = (0..300u32).map(|i| ((i * 7919) % q) as u16).collect();
            for c in [0u32, 1, 2, 0x53, q - 1] {
                let c = f.element(c).unwrap();
                let mut dst: Vec<u16> = (0..300u32).map(|i| ((i * 31) % q) as u16).collect();
                let expect: Vec<u16> = dst
                    .iter()
                    .zip(&src)
                    .map(|(&d, &s)| d ^ f.mul(c, FieldElement(s)).value())
                    .collect();
                f.mul_add_slice(&mut dst, &src, c);
                assert_eq!(dst, expect);
            }
        }
    }

    #[test]
    fn byte_conversion_roundtrip() {
        let f = Field::gf65536();
        let bytes = [1u8, 2, 3, 4, 0xFF, 0xEE];
        let el = f.bytes_to_elements(&bytes);
        assert_eq!(el, vec![0x0201, 0x0403, 0xEEFF]);
        assert_eq!(f.elements_to_bytes(&el), bytes);
    }
}
