//! Fair-division instances: a goods count plus one valuation per agent.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::valuation::Valuation;

#[derive(Clone, PartialEq, Debug)]
pub struct Instance {
    m: usize,
    valuations: Vec<Valuation>,
    identical: bool,
}

impl Instance {
    pub fn distinct(valuations: Vec<Valuation>) -> Result<Self> {
        if valuations.is_empty() {
            return Err(Error::InvalidValuation(
                "an instance needs at least one agent".into(),
            ));
        }
        let m = valuations[0].goods();
        for v in &valuations {
            if v.goods() != m {
                return Err(Error::WidthMismatch {
                    expected: m,
                    got: v.goods(),
                });
            }
        }
        Ok(Instance {
            m,
            valuations,
            identical: false,
        })
    }

    pub fn identical(v: Valuation, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidValuation(
                "an instance needs at least one agent".into(),
            ));
        }
        let m = v.goods();
        Ok(Instance {
            m,
            valuations: vec![v; n],
            identical: true,
        })
    }

    pub fn goods(&self) -> usize {
        self.m
    }

    pub fn agents(&self) -> usize {
        self.valuations.len()
    }

    pub fn valuations(&self) -> &[Valuation] {
        &self.valuations
    }

    pub fn valuation(&self, agent: usize) -> &Valuation {
        &self.valuations[agent]
    }

    pub fn is_identical(&self) -> bool {
        self.identical || self.valuations.len() == 1
    }

    /// The shared valuation, when this is an identical-agents instance.
    pub fn shared_valuation(&self) -> Option<&Valuation> {
        if self.is_identical() {
            Some(&self.valuations[0])
        } else {
            None
        }
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    identical: Option<bool>,
    agents: Vec<Valuation>,
}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = if self.identical {
            InstanceRepr {
                m: self.m,
                n: Some(self.valuations.len()),
                identical: Some(true),
                agents: vec![self.valuations[0].clone()],
            }
        } else {
            InstanceRepr {
                m: self.m,
                n: None,
                identical: None,
                agents: self.valuations.clone(),
            }
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = InstanceRepr::deserialize(d)?;
        let instance = if repr.identical == Some(true) {
            if repr.agents.len() != 1 {
                return Err(D::Error::custom(
                    "identical instances list exactly one valuation",
                ));
            }
            let n = repr
                .n
                .ok_or_else(|| D::Error::custom("identical instances need \"n\""))?;
            Instance::identical(repr.agents.into_iter().next().expect("checked"), n)
                .map_err(D::Error::custom)?
        } else {
            Instance::distinct(repr.agents).map_err(D::Error::custom)?
        };
        if instance.goods() != repr.m {
            return Err(D::Error::custom(format!(
                "instance declares m={} but valuations have {} goods",
                repr.m,
                instance.goods()
            )));
        }
        Ok(instance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_shortcut_round_trips() {
        let v = crate::canonical::greedy_trap_example().valuation;
        let inst = Instance::identical(v, 2).unwrap();
        let json = serde_json::to_string(&inst).unwrap();
        assert!(json.contains("\"identical\":true"));
        let back: Instance = serde_json::from_str(&json).unwrap();
        assert_eq!(inst, back);
        assert_eq!(back.agents(), 2);
        assert!(back.shared_valuation().is_some());
    }

    #[test]
    fn distinct_agents_round_trip() {
        let inst = Instance::distinct(vec![crate::gen::additive(3, 1), crate::gen::additive(3, 2)])
            .unwrap();
        let json = serde_json::to_string(&inst).unwrap();
        let back: Instance = serde_json::from_str(&json).unwrap();
        assert_eq!(inst, back);
        assert!(back.shared_valuation().is_none());
    }

    #[test]
    fn mismatched_widths_are_rejected() {
        assert!(
            Instance::distinct(vec![crate::gen::additive(3, 1), crate::gen::additive(4, 2),])
                .is_err()
        );
        let bad = r#"{"m":5,"agents":[{"type":"additive","weights":[1,2]}]}"#;
        assert!(serde_json::from_str::<Instance>(bad).is_err());
    }
}
