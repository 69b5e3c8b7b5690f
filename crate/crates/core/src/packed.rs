//! Fixed-width unsigned integers packed into 64-bit words.

/// Number of bits needed to represent every value in `0..=max`.
pub fn bits_for(max: u64) -> u32 {
    (u64::BITS - max.leading_zeros()).max(1)
}

/// A vector of `len` integers of `width` bits each, entries may straddle
/// word boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedInts {
    words: Vec<u64>,
    width: u32,
    len: usize,
}

impl PackedInts {
    /// `len` zeroes, each wide enough to hold `max`.
    pub fn zeroed(len: usize, max: u64) -> PackedInts {
        let width = bits_for(max);
        let bits = len as u64 * width as u64;
        PackedInts {
            words: vec![0; bits.div_ceil(64) as usize],
            width,
            len,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    fn mask(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i < self.len);
        let bit = i as u64 * self.width as u64;
        let word = (bit / 64) as usize;
        let offset = (bit % 64) as u32;
        let mut value = self.words[word] >> offset;
        if offset + self.width > 64 {
            value |= self.words[word + 1] << (64 - offset);
        }
        value & self.mask()
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: u64) {
        debug_assert!(i < self.len);
        let mask = self.mask();
        debug_assert!(
            value <= mask,
            "value {value} does not fit in {} bits",
            self.width
        );
        let bit = i as u64 * self.width as u64;
        let word = (bit / 64) as usize;
        let offset = (bit % 64) as u32;
        self.words[word] = (self.words[word] & !(mask << offset)) | (value << offset);
        if offset + self.width > 64 {
            let spill = 64 - offset;
            self.words[word + 1] = (self.words[word + 1] & !(mask >> spill)) | (value >> spill);
        }
    }

    /// Bytes held by the backing buffer.
    pub fn allocated_bytes(&self) -> usize {
        self.words.capacity() * std::mem::size_of::<u64>()
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
        assert_eq!(bits_for(3), 2);
        assert_eq!(bits_for(4), 3);
        assert_eq!(bits_for(100_000), 17);
        assert_eq!(bits_for(u64::MAX), 64);
    }

    proptest! {
        #[test]
        fn behaves_like_a_vec(max in 0u64..=u64::MAX, ops in prop::collection::vec((0usize..97, any::<u64>()), 0..200)) {
            let len = 97;
            let mut packed = PackedInts::zeroed(len, max);
            let mut plain = vec![0u64; len];
            let limit = if packed.width() == 64 { u64::MAX } else { (1u64 << packed.width()) - 1 };
            for (i, value) in ops {
                let value = value & limit;
                packed.set(i, value);
                plain[i] = value;
            }
            for (i, &expected) in plain.iter().enumerate() {
                prop_assert_eq!(packed.get(i), expected);
            }
        }
    }
}
