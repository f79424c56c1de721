//! Functions on a finite group, measures, and the group convolution.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::scalar::Scalar;

pub(crate) fn same_group(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::GroupMismatch(a.label().to_string(), b.label().to_string()))
    }
}

/// A scalar-valued function on the elements of a group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction<T> {
    group: Arc<FiniteGroup>,
    values: Vec<T>,
}

impl<T: Scalar> GroupFunction<T> {
    pub fn new(group: Arc<FiniteGroup>, values: Vec<T>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::LengthMismatch { expected: group.order(), got: values.len() });
        }
        Ok(Self { group, values })
    }

    pub fn zero(group: Arc<FiniteGroup>) -> Self {
        Self::constant(group, T::zero())
    }

    pub fn constant(group: Arc<FiniteGroup>, value: T) -> Self {
        let values = vec![value; group.order()];
        Self { group, values }
    }

    /// Indicator of a single element.
    pub fn indicator(group: Arc<FiniteGroup>, g: usize) -> Result<Self> {
        group.check_element(g)?;
        let mut f = Self::zero(group);
        f.values[g] = T::one();
        Ok(f)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn value(&self, g: usize) -> &T {
        &self.values[g]
    }

    pub fn set(&mut self, g: usize, value: T) -> Result<()> {
        self.group.check_element(g)?;
        self.values[g] = value;
        Ok(())
    }

    /// Left translation `g -> f(a * g)`.
    pub fn translate(&self, a: usize) -> Result<Self> {
        self.group.check_element(a)?;
        let values = self.group.elements().map(|g| self.values[self.group.mul(a, g)].clone()).collect();
        Ok(Self { group: self.group.clone(), values })
    }

    pub fn scale(&self, factor: &T) -> Self {
        let values = self.values.iter().map(|v| v.clone() * factor.clone()).collect();
        Self { group: self.group.clone(), values }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        same_group(&self.group, &other.group)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Self { group: self.group.clone(), values })
    }

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc + v.clone())
    }

    /// Converts the values to another scalar type.
    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> GroupFunction<U> {
        GroupFunction { group: self.group.clone(), values: self.values.iter().map(f).collect() }
    }
}

/// Non-negative weights on the group elements.
#[derive(Debug, Clone, PartialEq)]
pub struct Measure<T> {
    group: Arc<FiniteGroup>,
    weights: Vec<T>,
}

impl<T: Scalar> Measure<T> {
    /// Every element has weight one.
    pub fn counting(group: Arc<FiniteGroup>) -> Self {
        let weights = vec![T::one(); group.order()];
        Self { group, weights }
    }

    pub fn new(group: Arc<FiniteGroup>, weights: Vec<T>) -> Result<Self> {
        if weights.len() != group.order() {
            return Err(Error::LengthMismatch { expected: group.order(), got: weights.len() });
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::InvalidMeasure("negative weight".into()));
        }
        let total = weights.iter().fold(T::zero(), |acc, w| acc + w.clone());
        if !total.is_positive() {
            return Err(Error::InvalidMeasure("total mass must be positive".into()));
        }
        Ok(Self { group, weights })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn weight(&self, g: usize) -> &T {
        &self.weights[g]
    }

    pub fn total(&self) -> T {
        self.weights.iter().fold(T::zero(), |acc, w| acc + w.clone())
    }

    pub fn is_counting(&self) -> bool {
        self.weights.iter().all(|w| w.is_one())
    }
}

/// `(f * K)(g) = sum_h f(g h^-1) K(h) mu(h)`.
pub fn convolve<T: Scalar>(
    f: &GroupFunction<T>,
    kernel: &GroupFunction<T>,
    mu: &Measure<T>,
) -> Result<GroupFunction<T>> {
    same_group(&f.group, &kernel.group)?;
    same_group(&f.group, &mu.group)?;
    let group = &f.group;
    let f_support = f.values.iter().filter(|v| !v.is_zero()).count();
    let k_support = kernel.values.iter().filter(|v| !v.is_zero()).count();
    if f_support < k_support {
        // Sum over x = g h^-1 in the support of f instead: h = x^-1 g.
        let support: Vec<(usize, &T)> =
            group.elements().filter(|&x| !f.values[x].is_zero()).map(|x| (group.inv(x), &f.values[x])).collect();
        let values = group
            .elements()
            .map(|g| {
                support.iter().fold(T::zero(), |acc, (x_inv, fx)| {
                    let h = group.mul(*x_inv, g);
                    acc + (*fx).clone() * kernel.values[h].clone() * mu.weights[h].clone()
                })
            })
            .collect();
        return Ok(GroupFunction { group: group.clone(), values });
    }
    // Kernel times weight is shared by every output entry.
    let weighted: Vec<(usize, T)> = group
        .elements()
        .filter(|&h| !kernel.values[h].is_zero() && !mu.weights[h].is_zero())
        .map(|h| (group.inv(h), kernel.values[h].clone() * mu.weights[h].clone()))
        .collect();
    let values = group
        .elements()
        .map(|g| {
            weighted
                .iter()
                .fold(T::zero(), |acc, (h_inv, kw)| acc + f.values[group.mul(g, *h_inv)].clone() * kw.clone())
        })
        .collect();
    Ok(GroupFunction { group: group.clone(), values })
}
