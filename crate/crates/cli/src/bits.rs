//! Bit-stream framing: `m`-bit blocks, most significant bit first, packed
//! back to back with no padding.

use num_bigint::BigUint;

pub struct BitReader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(data: &'a [u8]) -> Self {
        BitReader { data, pos: 0 }
    }

    pub fn remaining(&self) -> usize {
        self.data.len() * 8 - self.pos
    }

    /// Reads the next `m` bits as an unsigned integer. Caller checks
    /// `remaining() >= m`.
    pub fn read(&mut self, m: u32) -> BigUint {
        let m = m as usize;
        if m <= 64 {
            let mut v = 0u64;
            for i in 0..m {
                v = (v << 1) | self.bit(self.pos + i) as u64;
            }
            self.pos += m;
            return BigUint::from(v);
        }
        // Right-align the block in whole bytes.
        let nbytes = m.div_ceil(8);
        let pad = nbytes * 8 - m;
        let mut out = vec![0u8; nbytes];
        for i in 0..m {
            if self.bit(self.pos + i) {
                let j = pad + i;
                out[j / 8] |= 0x80 >> (j % 8);
            }
        }
        self.pos += m;
        BigUint::from_bytes_be(&out)
    }

    fn bit(&self, i: usize) -> bool {
        self.data[i / 8] & (0x80 >> (i % 8)) != 0
    }
}

#[derive(Default)]
pub struct BitWriter {
    bytes: Vec<u8>,
    len: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the low `m` bits of `value`, most significant first.
    pub fn write(&mut self, value: &BigUint, m: u32) {
        let m = m as usize;
        let be = value.to_bytes_be();
        let total = be.len() * 8;
        for i in 0..m {
            // Bit i of the block, counted from the block's MSB.
            let from_lsb = m - 1 - i;
            let bit = from_lsb < total && {
                let j = total - 1 - from_lsb;
                be[j / 8] & (0x80 >> (j % 8)) != 0
            };
            self.push(bit);
        }
    }

    fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(8) {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }

    pub fn bit_len(&self) -> usize {
        self.len
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.bytes
    }
}
