use std::fmt;

use serde::Serialize;

use crate::arith::{Rational, Var};

/// Which part of the operator set an operator belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    /// Automorphism of the base system.
    Phi,
    /// Automorphism treated as a parameter.
    Sigma,
    /// Derivation.
    Delta,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Phi => "phi",
            Role::Sigma => "sigma",
            Role::Delta => "delta",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How an operator acts on its variable. Every other declared variable is fixed
/// (automorphisms) or annihilated (derivations).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    /// `v -> v + step`
    Shift { var: Var, step: Rational },
    /// `v -> factor * v`
    QDilate { var: Var, factor: Var },
    /// `d/dv`
    Derivation { var: Var },
    /// `v * d/dv`
    Euler { var: Var },
}

impl OpKind {
    pub fn var(&self) -> Var {
        match self {
            OpKind::Shift { var, .. }
            | OpKind::QDilate { var, .. }
            | OpKind::Derivation { var }
            | OpKind::Euler { var } => *var,
        }
    }

    pub fn is_automorphism(&self) -> bool {
        matches!(self, OpKind::Shift { .. } | OpKind::QDilate { .. })
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            OpKind::Shift { .. } => "shift",
            OpKind::QDilate { .. } => "qdilate",
            OpKind::Derivation { .. } => "derivation",
            OpKind::Euler { .. } => "euler",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperatorSpec {
    pub name: String,
    pub role: Role,
    pub kind: OpKind,
}

impl OperatorSpec {
    pub fn new(name: impl Into<String>, role: Role, kind: OpKind) -> Self {
        OperatorSpec {
            name: name.into(),
            role,
            kind,
        }
    }
}

/// Position of an operator in its context's declaration list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpId(pub usize);

/// An operator or, for automorphisms, its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OpRef {
    pub id: OpId,
    pub inverse: bool,
}

impl OpRef {
    pub fn forward(id: OpId) -> Self {
        OpRef { id, inverse: false }
    }

    pub fn inverse(id: OpId) -> Self {
        OpRef { id, inverse: true }
    }
}

impl From<OpId> for OpRef {
    fn from(id: OpId) -> Self {
        OpRef::forward(id)
    }
}
