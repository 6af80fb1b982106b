//! Residuals of identity checks and their pass/fail outcomes.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::field::VectorField;
use crate::series::{fmt_q, Order, Series, Q};

/// A quantity that must vanish within its validity order.
#[derive(Clone, Debug)]
pub enum Residual {
    Scalar(Series),
    Field(VectorField),
    /// A yes/no condition with a description of what was compared.
    Flag(bool, String),
}

/// The first nonzero coefficient of a failing residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Offending {
    /// Which instance of the check produced it.
    pub instance: String,
    /// Field component `(level, class)`, if the residual is a field.
    pub component: Option<(u32, u32)>,
    pub monomial: String,
    pub coefficient: Q,
}

impl Residual {
    pub fn validity(&self) -> Order {
        match self {
            Residual::Scalar(s) => s.valid(),
            Residual::Field(f) => f.valid(),
            Residual::Flag(..) => Order::EXACT,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Residual::Scalar(s) => s.is_zero(),
            Residual::Field(f) => f.is_zero(),
            Residual::Flag(ok, _) => *ok,
        }
    }

    /// First nonzero coefficient, in canonical monomial order.
    pub fn offending(&self, instance: &str) -> Option<Offending> {
        match self {
            Residual::Scalar(s) => s.first_term().map(|(m, c)| Offending {
                instance: instance.into(),
                component: None,
                monomial: m.display(&s.window()),
                coefficient: c.clone(),
            }),
            Residual::Field(f) => f.first_nonzero().and_then(|(v, s)| {
                s.first_term().map(|(m, c)| Offending {
                    instance: instance.into(),
                    component: Some((v.level, v.class)),
                    monomial: m.display(&s.window()),
                    coefficient: c.clone(),
                })
            }),
            Residual::Flag(ok, what) => {
                if *ok {
                    None
                } else {
                    Some(Offending {
                        instance: format!("{instance}: {what}"),
                        component: None,
                        monomial: "1".into(),
                        coefficient: Q::from_integer(1.into()),
                    })
                }
            }
        }
    }
}

impl From<Series> for Residual {
    fn from(s: Series) -> Self {
        Residual::Scalar(s)
    }
}

impl From<VectorField> for Residual {
    fn from(f: VectorField) -> Self {
        Residual::Field(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip(String),
}

/// Outcome of one named check over all its instances.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub id: String,
    pub suite: String,
    pub status: Status,
    /// Lowest validity order over the instances.
    pub validity: Order,
    pub instances: usize,
    pub offending: Option<Offending>,
    pub error: Option<String>,
}

impl CheckOutcome {
    /// Judges a list of named residuals. A check whose validity fell
    /// below zero certifies nothing and fails.
    pub fn judge(id: &str, suite: &str, residuals: &[(String, Residual)]) -> CheckOutcome {
        let mut validity = Order::EXACT;
        let mut offending = None;
        let mut error = None;
        for (name, r) in residuals {
            validity = validity.min(r.validity());
            if offending.is_none() && !r.is_zero() {
                offending = r.offending(name);
            }
            if error.is_none() && r.validity() < Order::at(0) {
                error = Some(format!("{name}: validity exhausted"));
            }
        }
        let ok = offending.is_none() && error.is_none() && !residuals.is_empty();
        if residuals.is_empty() {
            error = Some("no instances evaluated".into());
        }
        CheckOutcome {
            id: id.into(),
            suite: suite.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            validity,
            instances: residuals.len(),
            offending,
            error,
        }
    }

    pub fn errored(id: &str, suite: &str, msg: String) -> CheckOutcome {
        CheckOutcome {
            id: id.into(),
            suite: suite.into(),
            status: Status::Fail,
            validity: Order::NONE,
            instances: 0,
            offending: None,
            error: Some(msg),
        }
    }

    pub fn skipped(id: &str, suite: &str, reason: String) -> CheckOutcome {
        CheckOutcome {
            id: id.into(),
            suite: suite.into(),
            status: Status::Skip(reason),
            validity: Order::NONE,
            instances: 0,
            offending: None,
            error: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// One-line human summary.
    pub fn line(&self) -> String {
        let st = match &self.status {
            Status::Pass => String::from("PASS"),
            Status::Fail => String::from("FAIL"),
            Status::Skip(r) => format!("SKIP ({r})"),
        };
        let mut s =
            format!("{st} {} [{}] instances={} validity={}", self.id, self.suite, self.instances, self.validity);
        if let Some(o) = &self.offending {
            let comp = o.component.map(|(l, c)| format!(" component=({l},{c})")).unwrap_or_default();
            s.push_str(&format!(" first-nonzero: {}{} {} * {}", o.instance, comp, fmt_q(&o.coefficient), o.monomial));
        }
        if let Some(e) = &self.error {
            s.push_str(&format!(" error: {e}"));
        }
        s
    }
}

/// Collects named residuals.
#[derive(Default)]
pub struct Residuals(pub Vec<(String, Residual)>);

impl Residuals {
    pub fn new() -> Self {
        Residuals(Vec::new())
    }

    pub fn push<R: Into<Residual>>(&mut self, name: impl Into<String>, r: R) {
        self.0.push((name.into(), r.into()));
    }
}
