//! Adjoined Σ-indeterminates and their lazily materialized shifts.

use std::collections::HashMap;

use crate::arith::Var;
use crate::matrix::Mat;

/// One completion step's block of adjoined variables `x_1..x_d`.
#[derive(Clone, Debug)]
pub struct Family {
    /// Σ position of the step that introduced the family.
    pub step: usize,
    /// Unshifted member names, in order.
    pub names: Vec<String>,
    /// `e[i]` gives `σ_i(x) = e[i] · x` for Σ positions `i < step`.
    pub e: Vec<Mat>,
    /// `g[i] = σ_i^{-1}(e[i])^{-1}`, so `σ_i^{-1}(x) = g[i] · x`.
    pub(crate) g: Vec<Mat>,
}

/// A materialized extension variable: member `member` of family `family` shifted by
/// `σ_{step+j}^{shift[j]}` for the free operators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct ShiftKey {
    pub family: usize,
    pub member: usize,
    pub shift: Vec<i32>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct ExtTable {
    pub families: Vec<Family>,
    pub keys: Vec<ShiftKey>,
    pub names: Vec<String>,
    pub index: HashMap<ShiftKey, usize>,
    pub by_name: HashMap<String, usize>,
    /// Cached shifted action matrices keyed by `(family, sigma position, inverse, shift)`.
    pub action_cache: HashMap<(usize, usize, bool, Vec<i32>), Mat>,
}

impl ExtTable {
    pub fn lookup(&self, key: &ShiftKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub fn insert(&mut self, key: ShiftKey, name: String) -> usize {
        if let Some(i) = self.index.get(&key) {
            return *i;
        }
        let i = self.keys.len();
        self.index.insert(key.clone(), i);
        self.by_name.insert(name.clone(), i);
        self.keys.push(key);
        self.names.push(name);
        i
    }
}

/// Name of a shifted member, e.g. `xi3_1__sa_m1__sb_2`.
pub(crate) fn shifted_name(base: &str, free_ops: &[String], shift: &[i32]) -> String {
    let mut s = base.to_string();
    for (op, &e) in free_ops.iter().zip(shift) {
        if e == 0 {
            continue;
        }
        s.push_str("__");
        s.push_str(op);
        s.push('_');
        if e < 0 {
            s.push('m');
        }
        s.push_str(&e.unsigned_abs().to_string());
    }
    s
}

/// Inverse of [`shifted_name`] for a known member base name.
pub(crate) fn parse_shift(suffix: &str, free_ops: &[String]) -> Option<Vec<i32>> {
    let mut shift = vec![0i32; free_ops.len()];
    let mut rest = suffix;
    let mut last: Option<usize> = None;
    while !rest.is_empty() {
        rest = rest.strip_prefix("__")?;
        // Longest operator name that matches, followed by `_`.
        let (j, after) = free_ops
            .iter()
            .enumerate()
            .filter_map(|(j, op)| rest.strip_prefix(op.as_str())?.strip_prefix('_').map(|a| (j, a)))
            .max_by_key(|(j, _)| free_ops[*j].len())?;
        if last.is_some_and(|l| l >= j) {
            return None;
        }
        last = Some(j);
        let (neg, digits) = match after.strip_prefix('m') {
            Some(d) => (true, d),
            None => (false, after),
        };
        let end = digits.find(|c: char| !c.is_ascii_digit()).unwrap_or(digits.len());
        if end == 0 {
            return None;
        }
        let n: i32 = digits[..end].parse().ok()?;
        if n == 0 || digits[..end].starts_with('0') {
            return None;
        }
        shift[j] = if neg { -n } else { n };
        rest = &digits[end..];
    }
    Some(shift)
}

pub(crate) fn var_of(base_count: usize, slot: usize) -> Var {
    Var((base_count + slot) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_names_round_trip() {
        let ops = vec!["sb".to_string(), "sb_c".to_string(), "sc".to_string()];
        for shift in [vec![0, 0, 0], vec![1, 0, -2], vec![0, -3, 4], vec![12, 1, 0]] {
            let n = shifted_name("xi2_1", &ops, &shift);
            let suffix = n.strip_prefix("xi2_1").unwrap();
            assert_eq!(parse_shift(suffix, &ops), Some(shift));
        }
        assert_eq!(parse_shift("__sb_0", &ops), None);
        assert_eq!(parse_shift("__sc_1__sb_1", &ops), None);
    }
}
