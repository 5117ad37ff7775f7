use std::cmp::Ordering;

use serde::Serialize;

/// Monomial orders on exponent vectors. Variable `0` is the most significant
/// in every tie-break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    /// Grevlex on the first `split` variables, ties broken by grevlex on the
    /// rest. Eliminates the first block.
    BlockGrevLex { split: usize },
}

impl Default for MonomialOrder {
    fn default() -> Self {
        MonomialOrder::GrevLex
    }
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&x| x as u64).sum();
    let db: u64 = b.iter().map(|&x| x as u64).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match *self {
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::GrevLex => grevlex(a, b),
            MonomialOrder::BlockGrevLex { split } => {
                grevlex(&a[..split], &b[..split]).then_with(|| grevlex(&a[split..], &b[split..]))
            }
        }
    }
}
