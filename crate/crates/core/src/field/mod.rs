//! The operator field: declared variables, named automorphisms and derivations split into
//! Φ, Σ and Δ, adjoined Σ-indeterminates, and the operator action on rational functions.

mod extension;
mod operator;

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use serde::Serialize;

use crate::arith::{ArithError, RatFunc, Var};
use crate::matrix::{Mat, MatrixError};

pub use extension::Family;
pub use operator::{OpId, OpKind, OpRef, OperatorSpec, Role};

use extension::{parse_shift, shifted_name, var_of, ExtTable, ShiftKey};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("invalid identifier `{0}`")]
    InvalidName(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("operator `{name}`: {reason}")]
    InvalidOperator { name: String, reason: String },
    #[error("derivation `{0}` has no inverse")]
    InverseOfDerivation(String),
    #[error("extension: {0}")]
    Extension(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A pair of operators that fail to commute on a generator.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutationViolation {
    pub first: String,
    pub second: String,
    pub variable: String,
}

/// Summary of one materialized extension variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionVar {
    pub var: Var,
    pub name: String,
    pub family: usize,
    pub member: usize,
    /// Exponents of the free Σ operators (positions `step..r`) applied to the member.
    pub shift: Vec<i32>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A field `Q(vars)` (plus adjoined indeterminates) with commuting operators.
pub struct FieldContext {
    vars: Vec<String>,
    ops: Vec<OperatorSpec>,
    phi: Vec<OpId>,
    sigma: Vec<OpId>,
    delta: Vec<OpId>,
    ext: RwLock<ExtTable>,
}

impl Clone for FieldContext {
    fn clone(&self) -> Self {
        FieldContext {
            vars: self.vars.clone(),
            ops: self.ops.clone(),
            phi: self.phi.clone(),
            sigma: self.sigma.clone(),
            delta: self.delta.clone(),
            ext: RwLock::new(self.table().clone()),
        }
    }
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("vars", &self.vars)
            .field("ops", &self.ops)
            .field("extension_vars", &self.table().names)
            .finish()
    }
}

impl FieldContext {
    /// Checks names and operator well-formedness. Commutation is checked separately by
    /// [`FieldContext::validate_commutation`].
    pub fn new(vars: Vec<String>, ops: Vec<OperatorSpec>) -> Result<Self, FieldError> {
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            if !is_identifier(v) {
                return Err(FieldError::InvalidName(v.clone()));
            }
            if !seen.insert(v.as_str()) {
                return Err(FieldError::DuplicateName(v.clone()));
            }
        }
        let mut op_names = std::collections::HashSet::new();
        let (mut phi, mut sigma, mut delta) = (Vec::new(), Vec::new(), Vec::new());
        for (i, op) in ops.iter().enumerate() {
            if !is_identifier(&op.name) {
                return Err(FieldError::InvalidName(op.name.clone()));
            }
            if !op_names.insert(op.name.as_str()) {
                return Err(FieldError::DuplicateName(op.name.clone()));
            }
            let bad = |reason: &str| FieldError::InvalidOperator {
                name: op.name.clone(),
                reason: reason.to_string(),
            };
            if op.kind.var().index() >= vars.len() {
                return Err(bad("acts on an undeclared variable"));
            }
            match &op.kind {
                OpKind::QDilate { var, factor } => {
                    if factor.index() >= vars.len() {
                        return Err(bad("dilation factor is not a declared variable"));
                    }
                    if factor == var {
                        return Err(bad("dilation factor equals the acted-on variable"));
                    }
                }
                OpKind::Shift { step, .. } if num_traits::Zero::is_zero(step) => {
                    return Err(bad("shift step is zero"));
                }
                _ => {}
            }
            match (op.kind.is_automorphism(), op.role) {
                (true, Role::Delta) => return Err(bad("automorphisms must have role phi or sigma")),
                (false, Role::Phi | Role::Sigma) => return Err(bad("derivations must have role delta")),
                _ => {}
            }
            match op.role {
                Role::Phi => phi.push(OpId(i)),
                Role::Sigma => sigma.push(OpId(i)),
                Role::Delta => delta.push(OpId(i)),
            }
        }
        Ok(FieldContext {
            vars,
            ops,
            phi,
            sigma,
            delta,
            ext: RwLock::new(ExtTable::default()),
        })
    }

    fn table(&self) -> std::sync::RwLockReadGuard<'_, ExtTable> {
        self.ext.read().unwrap_or_else(|e| e.into_inner())
    }

    fn table_mut(&self) -> std::sync::RwLockWriteGuard<'_, ExtTable> {
        self.ext.write().unwrap_or_else(|e| e.into_inner())
    }

    pub fn base_vars(&self) -> &[String] {
        &self.vars
    }

    pub fn base_var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn operators(&self) -> &[OperatorSpec] {
        &self.ops
    }

    pub fn op(&self, id: OpId) -> &OperatorSpec {
        &self.ops[id.0]
    }

    pub fn op_by_name(&self, name: &str) -> Option<OpId> {
        self.ops.iter().position(|o| o.name == name).map(OpId)
    }

    pub fn phi(&self) -> &[OpId] {
        &self.phi
    }

    pub fn sigma(&self) -> &[OpId] {
        &self.sigma
    }

    pub fn delta(&self) -> &[OpId] {
        &self.delta
    }

    pub fn sigma_position(&self, id: OpId) -> Option<usize> {
        self.sigma.iter().position(|&s| s == id)
    }

    pub fn is_extension(&self, v: Var) -> bool {
        v.index() >= self.vars.len()
    }

    /// Base variables moved by some Φ or Δ operator.
    pub fn is_principal(&self, v: Var) -> bool {
        !self.is_extension(v)
            && self
                .ops
                .iter()
                .any(|o| o.role != Role::Sigma && o.kind.var() == v)
    }

    pub fn principal_vars(&self) -> Vec<Var> {
        (0..self.vars.len() as u32)
            .map(Var)
            .filter(|&v| self.is_principal(v))
            .collect()
    }

    /// Base variables that are constants for every Φ and Δ operator.
    pub fn parameter_vars(&self) -> Vec<Var> {
        (0..self.vars.len() as u32)
            .map(Var)
            .filter(|&v| !self.is_principal(v))
            .collect()
    }

    pub fn var_name(&self, v: Var) -> String {
        let i = v.index();
        if i < self.vars.len() {
            self.vars[i].clone()
        } else {
            self.table()
                .names
                .get(i - self.vars.len())
                .cloned()
                .unwrap_or_else(|| format!("#{i}"))
        }
    }

    /// Looks up a variable by name. Shifted extension names such as `xi2_1__sc_1` are
    /// materialized on demand.
    pub fn resolve(&self, name: &str) -> Option<Var> {
        if let Some(i) = self.vars.iter().position(|v| v == name) {
            return Some(Var(i as u32));
        }
        let (hit, families) = {
            let t = self.table();
            (t.by_name.get(name).copied(), t.families.clone())
        };
        if let Some(slot) = hit {
            return Some(var_of(self.vars.len(), slot));
        }
        for (fi, fam) in families.iter().enumerate() {
            let free = self.free_op_names(fam.step);
            for (m, base) in fam.names.iter().enumerate() {
                if let Some(suffix) = name.strip_prefix(base.as_str()) {
                    if suffix.starts_with("__") {
                        if let Some(shift) = parse_shift(suffix, &free) {
                            return Some(self.intern(fi, m, shift));
                        }
                    }
                }
            }
        }
        None
    }

    fn free_op_names(&self, step: usize) -> Vec<String> {
        self.sigma[step..]
            .iter()
            .map(|&id| self.ops[id.0].name.clone())
            .collect()
    }

    fn intern(&self, family: usize, member: usize, shift: Vec<i32>) -> Var {
        let key = ShiftKey {
            family,
            member,
            shift,
        };
        if let Some(slot) = self.table().lookup(&key) {
            return var_of(self.vars.len(), slot);
        }
        let mut t = self.table_mut();
        let fam = &t.families[family];
        let name = shifted_name(&fam.names[member], &self.free_op_names(fam.step), &key.shift);
        let slot = t.insert(key, name);
        var_of(self.vars.len(), slot)
    }

    pub fn families(&self) -> Vec<Family> {
        self.table().families.clone()
    }

    pub fn extension_vars(&self) -> Vec<ExtensionVar> {
        let t = self.table();
        t.keys
            .iter()
            .enumerate()
            .map(|(slot, k)| ExtensionVar {
                var: var_of(self.vars.len(), slot),
                name: t.names[slot].clone(),
                family: k.family,
                member: k.member,
                shift: k.shift.clone(),
            })
            .collect()
    }

    /// Number of adjoined (unshifted) indeterminates over all families.
    pub fn adjoined_count(&self) -> usize {
        self.table().families.iter().map(|f| f.names.len()).sum()
    }

    /// A new context with indeterminates `x_1..x_d` adjoined at Σ position `step`, acted
    /// on by `σ_i(x) = e[i] x` for `i < step` and freely by the remaining Σ operators.
    pub fn adjoin_family(&self, step: usize, e: Vec<Mat>) -> Result<(FieldContext, Vec<Var>), FieldError> {
        if step >= self.sigma.len() {
            return Err(FieldError::Extension(format!("step {step} out of range")));
        }
        if e.len() != step {
            return Err(FieldError::Extension(format!(
                "expected {step} action matrices, got {}",
                e.len()
            )));
        }
        if self.table().families.iter().any(|f| f.step == step) {
            return Err(FieldError::Extension(format!("step {step} already has a family")));
        }
        let d = match e.first() {
            Some(m) => m.rows(),
            None => {
                return Err(FieldError::Extension(
                    "a family needs at least one linear action".into(),
                ))
            }
        };
        let mut g = Vec::with_capacity(step);
        for (i, m) in e.iter().enumerate() {
            if m.rows() != d || m.cols() != d {
                return Err(FieldError::Extension("action matrices must be d x d".into()));
            }
            let shifted = self.apply_mat(OpRef::inverse(self.sigma[i]), m)?;
            g.push(shifted.inv()?);
        }
        let mut prefix = String::from("xi");
        while self.vars.iter().any(|v| v.starts_with(&prefix)) {
            prefix.push('_');
        }
        let names: Vec<String> = (0..d).map(|s| format!("{prefix}{}_{}", step + 1, s + 1)).collect();
        let out = self.clone();
        let family = {
            let mut t = out.table_mut();
            t.families.push(Family {
                step,
                names,
                e,
                g,
            });
            t.families.len() - 1
        };
        let zero = vec![0; self.sigma.len() - step];
        let members = (0..d).map(|m| out.intern(family, m, zero.clone())).collect();
        Ok((out, members))
    }

    /// Applies an operator (or the inverse of an automorphism) to `f`.
    pub fn apply(&self, op: OpRef, f: &RatFunc) -> Result<RatFunc, FieldError> {
        let spec = &self.ops[op.id.0];
        match spec.kind {
            OpKind::Derivation { .. } | OpKind::Euler { .. } if op.inverse => {
                Err(FieldError::InverseOfDerivation(spec.name.clone()))
            }
            OpKind::Derivation { var } => Ok(f.partial(var)),
            OpKind::Euler { var } => Ok(f.partial(var).mul(&RatFunc::var(var))),
            OpKind::Shift { .. } | OpKind::QDilate { .. } => {
                let mut images: HashMap<Var, RatFunc> = HashMap::new();
                for v in f.vars() {
                    if let Some(img) = self.var_image(op, v)? {
                        images.insert(v, img);
                    }
                }
                if images.is_empty() {
                    return Ok(f.clone());
                }
                Ok(f.substitute(&|v| images.get(&v).cloned())?)
            }
        }
    }

    /// `op^e` for an automorphism (negative `e` applies the inverse).
    pub fn apply_pow(&self, id: OpId, e: i32, f: &RatFunc) -> Result<RatFunc, FieldError> {
        let r = if e < 0 {
            OpRef::inverse(id)
        } else {
            OpRef::forward(id)
        };
        let mut out = f.clone();
        for _ in 0..e.unsigned_abs() {
            out = self.apply(r, &out)?;
        }
        Ok(out)
    }

    pub fn apply_mat(&self, op: OpRef, m: &Mat) -> Result<Mat, FieldError> {
        m.try_map(|e| self.apply(op, e))
    }

    /// Image of a single generator under an automorphism; `None` when it is fixed.
    fn var_image(&self, op: OpRef, v: Var) -> Result<Option<RatFunc>, FieldError> {
        let spec = &self.ops[op.id.0];
        if !self.is_extension(v) {
            let img = match &spec.kind {
                OpKind::Shift { var, step } if *var == v => {
                    let s = if op.inverse { -step.clone() } else { step.clone() };
                    RatFunc::var(v).add(&RatFunc::constant(s))
                }
                OpKind::QDilate { var, factor } if *var == v => {
                    let (x, q) = (RatFunc::var(v), RatFunc::var(*factor));
                    if op.inverse {
                        x.div(&q)?
                    } else {
                        x.mul(&q)
                    }
                }
                _ => return Ok(None),
            };
            return Ok(Some(img));
        }
        let Some(pos) = self.sigma_position(op.id) else {
            return Ok(None);
        };
        let slot = v.index() - self.vars.len();
        let (key, step, d) = {
            let t = self.table();
            let key = t.keys[slot].clone();
            let fam = &t.families[key.family];
            (key, fam.step, fam.names.len())
        };
        if pos >= step {
            let mut shift = key.shift.clone();
            shift[pos - step] += if op.inverse { -1 } else { 1 };
            return Ok(Some(RatFunc::var(self.intern(key.family, key.member, shift))));
        }
        let action = self.shifted_action(key.family, pos, op.inverse, &key.shift)?;
        let mut acc = RatFunc::zero();
        for t in 0..d {
            let c = action.get(key.member, t);
            if c.is_zero() {
                continue;
            }
            let xt = self.intern(key.family, t, key.shift.clone());
            acc = acc.add(&c.mul(&RatFunc::var(xt)));
        }
        Ok(Some(acc))
    }

    /// `θ(E_i)` (or `θ(G_i)` for the inverse) where θ is the free shift of a family.
    fn shifted_action(
        &self,
        family: usize,
        pos: usize,
        inverse: bool,
        shift: &[i32],
    ) -> Result<Mat, FieldError> {
        let cache_key = (family, pos, inverse, shift.to_vec());
        let (base, step) = {
            let t = self.table();
            if let Some(m) = t.action_cache.get(&cache_key) {
                return Ok(m.clone());
            }
            let fam = &t.families[family];
            let m = if inverse { &fam.g[pos] } else { &fam.e[pos] };
            (m.clone(), fam.step)
        };
        let mut m = base;
        for (j, &e) in shift.iter().enumerate() {
            let id = self.sigma[step + j];
            if e != 0 {
                m = m.try_map(|x| self.apply_pow(id, e, x))?;
            }
        }
        self.table_mut().action_cache.insert(cache_key, m.clone());
        Ok(m)
    }

    fn ref_name(&self, r: OpRef) -> String {
        let n = &self.ops[r.id.0].name;
        if r.inverse {
            format!("{n}^-1")
        } else {
            n.clone()
        }
    }

    /// Checks `a(b(v)) = b(a(v))` for every pair of operators (and automorphism inverses)
    /// on every base generator. Returns the violations; empty means the context is valid.
    pub fn validate_commutation(&self) -> Vec<CommutationViolation> {
        let mut refs = Vec::new();
        for (i, o) in self.ops.iter().enumerate() {
            refs.push(OpRef::forward(OpId(i)));
            if o.kind.is_automorphism() {
                refs.push(OpRef::inverse(OpId(i)));
            }
        }
        let mut out = Vec::new();
        for (x, &a) in refs.iter().enumerate() {
            for &b in &refs[x + 1..] {
                if a.id == b.id {
                    continue;
                }
                for v in 0..self.vars.len() as u32 {
                    let g = RatFunc::var(Var(v));
                    let ab = self.apply(b, &g).and_then(|y| self.apply(a, &y));
                    let ba = self.apply(a, &g).and_then(|y| self.apply(b, &y));
                    let ok = matches!((&ab, &ba), (Ok(p), Ok(q)) if p == q);
                    if !ok {
                        out.push(CommutationViolation {
                            first: self.ref_name(a),
                            second: self.ref_name(b),
                            variable: self.vars[v as usize].clone(),
                        });
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests;
