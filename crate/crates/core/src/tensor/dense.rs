use rayon::prelude::*;

use super::ring::Elem;

pub(crate) type Label = u32;

/// Dense tensor over qubit indices; `labels[0]` is the most significant bit.
#[derive(Clone, Debug)]
pub(crate) struct Dense<E> {
    pub labels: Vec<Label>,
    pub data: Vec<E>,
}

/// Maps each index of the new order to its index in the old order.
fn index_map(old: &[Label], new: &[Label]) -> Vec<usize> {
    let k = old.len();
    let weight: Vec<usize> = new
        .iter()
        .map(|l| {
            let q = old.iter().position(|x| x == l).expect("label present");
            1usize << (k - 1 - q)
        })
        .collect();
    // new bit p (MSB first) sits at weight[p] in the old index
    let lo_bits = k.min(12);
    let hi_bits = k - lo_bits;
    let table = |bits: usize, shift: usize| -> Vec<usize> {
        (0..1usize << bits)
            .map(|n| {
                let mut o = 0;
                for b in 0..bits {
                    if n >> b & 1 == 1 {
                        // new bit at position k-1-(b+shift) from MSB
                        o += weight[k - 1 - (b + shift)];
                    }
                }
                o
            })
            .collect()
    };
    let lo = table(lo_bits, 0);
    let hi = table(hi_bits, lo_bits);
    (0..1usize << k).map(|n| lo[n & ((1 << lo_bits) - 1)] + hi[n >> lo_bits]).collect()
}

impl<E: Elem> Dense<E> {
    pub fn permuted(&self, new: &[Label]) -> Dense<E> {
        if new == self.labels.as_slice() {
            return self.clone();
        }
        let map = index_map(&self.labels, new);
        Dense { labels: new.to_vec(), data: map.into_iter().map(|o| self.data[o].clone()).collect() }
    }

    /// Sums over every label that occurs twice.
    pub fn trace_repeated(mut self) -> Option<Dense<E>> {
        loop {
            let k = self.labels.len();
            let dup = (0..k).find_map(|p| (p + 1..k).find(|&q| self.labels[q] == self.labels[p]).map(|q| (p, q)));
            let Some((p, q)) = dup else { return Some(self) };
            let (bp, bq) = (k - 1 - p, k - 1 - q);
            let rest: Vec<Label> =
                self.labels.iter().enumerate().filter(|&(i, _)| i != p && i != q).map(|(_, l)| *l).collect();
            let mut data = vec![E::zero(); 1 << (k - 2)];
            for (idx, v) in self.data.iter().enumerate() {
                if (idx >> bp & 1) != (idx >> bq & 1) || v.is_zero() {
                    continue;
                }
                // drop bits bp and bq (bp > bq)
                let mut n = 0usize;
                let mut out_bit = 0;
                for b in 0..k {
                    if b == bp || b == bq {
                        continue;
                    }
                    n |= (idx >> b & 1) << out_bit;
                    out_bit += 1;
                }
                data[n] = data[n].checked_add(v)?;
            }
            self = Dense { labels: rest, data };
        }
    }

    /// Contracts shared labels. `None` signals arithmetic overflow.
    pub fn contract(&self, other: &Dense<E>) -> Option<Dense<E>> {
        let shared: Vec<Label> = self.labels.iter().copied().filter(|l| other.labels.contains(l)).collect();
        let free_a: Vec<Label> = self.labels.iter().copied().filter(|l| !shared.contains(l)).collect();
        let free_b: Vec<Label> = other.labels.iter().copied().filter(|l| !shared.contains(l)).collect();
        let a = self.permuted(&[free_a.clone(), shared.clone()].concat());
        let b = other.permuted(&[shared.clone(), free_b.clone()].concat());
        let (m, k, n) = (1usize << free_a.len(), 1usize << shared.len(), 1usize << free_b.len());
        let mut out = vec![E::zero(); m * n];
        let row = |i: usize, dst: &mut [E]| -> Option<()> {
            let arow = &a.data[i * k..(i + 1) * k];
            for (kk, x) in arow.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let brow = &b.data[kk * n..(kk + 1) * n];
                for (slot, y) in dst.iter_mut().zip(brow) {
                    if !y.is_zero() {
                        *slot = slot.fma(x, y)?;
                    }
                }
            }
            Some(())
        };
        let ok = if m * k * n >= 1 << 16 && m > 1 {
            out.par_chunks_mut(n).enumerate().try_for_each(|(i, dst)| row(i, dst))
        } else {
            out.chunks_mut(n).enumerate().try_for_each(|(i, dst)| row(i, dst))
        };
        ok?;
        Some(Dense { labels: [free_a, free_b].concat(), data: out })
    }
}
