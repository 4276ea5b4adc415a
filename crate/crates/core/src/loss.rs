//! Training losses over raw scores, with gradients w.r.t. those scores.
//!
//! Negatives are grouped: `neg[i * eta..(i + 1) * eta]` are the corruptions
//! of `pos[i]`.

use crate::model::LossKind;

/// Mean over all (positive, negative) pairs of `max(0, margin − pos + neg)`.
pub fn loss_pairwise(pos: &[f64], neg: &[f64], margin: f64) -> f64 {
    pairwise_with_grad(pos, neg, margin).loss
}

/// `−log softmax(pos)` over `{pos} ∪ neg`.
pub fn loss_multiclass_nll(pos: f64, neg: &[f64]) -> f64 {
    assert!(!neg.is_empty(), "multiclass NLL needs at least one negative");
    log_sum_exp(pos, neg) - pos
}

fn log_sum_exp(pos: f64, neg: &[f64]) -> f64 {
    let max = neg.iter().copied().fold(pos, f64::max);
    let sum: f64 = std::iter::once(pos).chain(neg.iter().copied()).map(|s| (s - max).exp()).sum();
    max + sum.ln()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossGrad {
    pub loss: f64,
    /// ∂loss/∂pos\[i\]
    pub d_pos: Vec<f64>,
    /// ∂loss/∂neg\[j\]
    pub d_neg: Vec<f64>,
}

pub fn pairwise_with_grad(pos: &[f64], neg: &[f64], margin: f64) -> LossGrad {
    assert!(!pos.is_empty() && neg.len().is_multiple_of(pos.len()), "negatives must be grouped per positive");
    let eta = neg.len() / pos.len();
    let pairs = neg.len() as f64;
    let mut loss = 0.0;
    let mut d_pos = vec![0.0; pos.len()];
    let mut d_neg = vec![0.0; neg.len()];
    for (i, &p) in pos.iter().enumerate() {
        for j in i * eta..(i + 1) * eta {
            let violation = margin - p + neg[j];
            if violation > 0.0 {
                loss += violation;
                d_pos[i] -= 1.0 / pairs;
                d_neg[j] += 1.0 / pairs;
            }
        }
    }
    LossGrad {
        loss: loss / pairs,
        d_pos,
        d_neg,
    }
}

/// Mean multiclass NLL over positives.
pub fn multiclass_nll_with_grad(pos: &[f64], neg: &[f64]) -> LossGrad {
    assert!(!pos.is_empty() && !neg.is_empty() && neg.len().is_multiple_of(pos.len()), "negatives must be grouped per positive");
    let eta = neg.len() / pos.len();
    let count = pos.len() as f64;
    let mut loss = 0.0;
    let mut d_pos = vec![0.0; pos.len()];
    let mut d_neg = vec![0.0; neg.len()];
    for (i, &p) in pos.iter().enumerate() {
        let group = &neg[i * eta..(i + 1) * eta];
        let lse = log_sum_exp(p, group);
        loss += lse - p;
        d_pos[i] = ((p - lse).exp() - 1.0) / count;
        for (j, &n) in group.iter().enumerate() {
            d_neg[i * eta + j] = (n - lse).exp() / count;
        }
    }
    LossGrad {
        loss: loss / count,
        d_pos,
        d_neg,
    }
}

pub fn loss_with_grad(kind: LossKind, pos: &[f64], neg: &[f64], margin: f64) -> LossGrad {
    match kind {
        LossKind::Pairwise => pairwise_with_grad(pos, neg, margin),
        LossKind::MulticlassNll => multiclass_nll_with_grad(pos, neg),
    }
}
