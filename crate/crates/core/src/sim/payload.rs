use bitvec::prelude::*;

/// Message body measured in exact bits. Fields are appended most significant
/// bit first with explicit widths.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Payload {
    bits: BitVec<u8, Msb0>,
}

/// Bits needed to write values up to and including `max`.
pub fn bits_for(max: u64) -> u32 {
    (u64::BITS - max.leading_zeros()).max(1)
}

impl Payload {
    pub fn new() -> Self {
        Payload::default()
    }

    /// Appends the low `width` bits of `value`.
    pub fn push(&mut self, value: u64, width: u32) -> &mut Self {
        debug_assert!(width <= 64);
        debug_assert!(width == 64 || value >> width == 0, "{value} does not fit in {width} bits");
        for i in (0..width).rev() {
            self.bits.push((value >> i) & 1 == 1);
        }
        self
    }

    pub fn with(mut self, value: u64, width: u32) -> Self {
        self.push(value, width);
        self
    }

    pub fn len_bits(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn reader(&self) -> Reader<'_> {
        Reader { bits: &self.bits, pos: 0 }
    }

    /// Bytes of the payload, left aligned and zero padded, as lowercase hex.
    pub fn to_hex(&self) -> String {
        let bytes: Vec<u8> =
            self.bits.chunks(8).map(|c| c.iter().fold(0u8, |acc, b| (acc << 1) | *b as u8) << (8 - c.len())).collect();
        hex::encode(bytes)
    }
}

pub struct Reader<'a> {
    bits: &'a BitSlice<u8, Msb0>,
    pos: usize,
}

impl Reader<'_> {
    pub fn take(&mut self, width: u32) -> Option<u64> {
        let end = self.pos + width as usize;
        if end > self.bits.len() {
            return None;
        }
        let v = self.bits[self.pos..end].iter().fold(0u64, |acc, b| (acc << 1) | *b as u64);
        self.pos = end;
        Some(v)
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.pos
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn widths() {
        assert_eq!(bits_for(0), 1);
        assert_eq!(bits_for(1), 1);
        assert_eq!(bits_for(2), 2);
        assert_eq!(bits_for(255), 8);
        assert_eq!(bits_for(256), 9);
    }

    #[test]
    fn hex_is_left_aligned() {
        let p = Payload::new().with(1, 1).with(0b101, 3);
        assert_eq!(p.len_bits(), 4);
        assert_eq!(p.to_hex(), "d0");
    }

    proptest! {
        #[test]
        fn fields_roundtrip(fields in proptest::collection::vec((0u32..=64, any::<u64>()), 0..8)) {
            let mut p = Payload::new();
            let mut expect = Vec::new();
            for (w, v) in fields {
                let v = if w == 64 { v } else if w == 0 { 0 } else { v & ((1u64 << w) - 1) };
                p.push(v, w);
                expect.push((w, v));
            }
            let total: u32 = expect.iter().map(|(w, _)| *w).sum();
            prop_assert_eq!(p.len_bits(), total as usize);
            let mut r = p.reader();
            for (w, v) in expect {
                prop_assert_eq!(r.take(w), Some(v));
            }
            prop_assert_eq!(r.remaining(), 0);
        }
    }
}
