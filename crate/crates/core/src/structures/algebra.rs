use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::Zero;

use crate::coalgebra::{square_on, Coalgebra, CoalgebraKind, CoalgebraOperator};
use crate::error::{Error, Result};
use crate::graded::{
    rational, solve_linear_system, Element, GradedSpace, LinearEquation, LinearSolution, MultilinearMap, Scalar,
};
use crate::report::CheckReport;

fn parity_sign(exponent: i64) -> i32 {
    if exponent.rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

/// Lie structures are encoded on the symmetric coalgebra, Leibniz ones on
/// the tensor coalgebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Lie,
    Leibniz,
}

/// A graded space with a degree-1 differential and a degree-0 bracket.
///
/// Nothing is assumed about the identities; [`AlgebraStructure::check_structure`]
/// tests them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraStructure {
    space: GradedSpace,
    flavor: Flavor,
    order: u32,
    differential: MultilinearMap,
    bracket: MultilinearMap,
}

/// Identity-level and coderivation-level verdicts for one structure.
#[derive(Debug, Clone)]
pub struct StructureReport {
    pub d_squared: CheckReport,
    pub derivation: CheckReport,
    pub jacobi: CheckReport,
    pub antisymmetry: Option<CheckReport>,
    /// `Q^2` on tensor words of length at most 3.
    pub square: CheckReport,
    /// `Q^2` on symmetric words of length at most 3 (Lie flavor only).
    pub symmetric_square: Option<CheckReport>,
    /// The failing tuples of the three identities coincide, arity by arity,
    /// with the words where the generator component of `Q^2` is nonzero.
    pub failures_match: bool,
}

impl StructureReport {
    pub fn identities_hold(&self) -> bool {
        self.d_squared.passed() && self.derivation.passed() && self.jacobi.passed()
    }

    pub fn square_vanishes(&self) -> bool {
        self.square.passed()
    }

    /// Both verdicts agree and they agree word by word.
    pub fn verdicts_agree(&self) -> bool {
        self.identities_hold() == self.square_vanishes() && self.failures_match
    }

    pub fn passed(&self) -> bool {
        self.identities_hold()
            && self.square_vanishes()
            && self.verdicts_agree()
            && self.antisymmetry.as_ref().map_or(true, CheckReport::passed)
            && self.symmetric_square.as_ref().map_or(true, CheckReport::passed)
    }
}

/// Maurer-Cartan residual and the two equivalent conditions of the twisting
/// lemma.
#[derive(Debug, Clone)]
pub struct McReport {
    /// `dα - 1/2 [α, α]`.
    pub residual: Element,
    /// `(d_α)^2 = 0` on every basis vector.
    pub d_alpha_squared: CheckReport,
    /// `[dα - 1/2 [α, α], x] = 0` for every basis vector `x`.
    pub residual_bracket: CheckReport,
}

impl McReport {
    pub fn is_maurer_cartan(&self) -> bool {
        self.residual.is_zero()
    }

    /// The two conditions hold or fail together.
    pub fn conditions_agree(&self) -> bool {
        self.d_alpha_squared.passed() == self.residual_bracket.passed()
    }

    pub fn twisting_allowed(&self) -> bool {
        self.d_alpha_squared.passed()
    }
}

impl AlgebraStructure {
    pub fn new(
        space: GradedSpace,
        flavor: Flavor,
        order: u32,
        differential: MultilinearMap,
        bracket: MultilinearMap,
    ) -> Result<Self> {
        let n = space.dim();
        let degrees = space.degrees();
        if differential.arity() != 1 || differential.shift() != 1 {
            return Err(Error::Degree("the differential must be linear of degree +1".into()));
        }
        if bracket.arity() != 2 || bracket.shift() != 0 {
            return Err(Error::Degree("the bracket must be bilinear of degree 0".into()));
        }
        for m in [&differential, &bracket] {
            if m.source_dim() != n || m.target_dim() != n {
                return Err(Error::KindMismatch("structure maps have the wrong dimensions".into()));
            }
            m.check_degrees(&degrees, &degrees)?;
            for (_, v) in m.entries() {
                for (_, c) in v.iter() {
                    if c.order() != order {
                        return Err(Error::Config("structure constant with a different truncation order".into()));
                    }
                }
            }
        }
        Ok(Self {
            space,
            flavor,
            order,
            differential,
            bracket,
        })
    }

    /// Zero differential and zero bracket.
    pub fn abelian(space: GradedSpace, flavor: Flavor, order: u32) -> Self {
        let n = space.dim();
        Self {
            space,
            flavor,
            order,
            differential: MultilinearMap::new(1, n, n, 1),
            bracket: MultilinearMap::new(2, n, n, 0),
        }
    }

    /// Builds a structure from `(input, output)` tables of constant
    /// coefficients given by basis names.
    pub fn from_tables(
        space: GradedSpace,
        flavor: Flavor,
        order: u32,
        differential: &[(&str, &[(&str, i64)])],
        bracket: &[((&str, &str), &[(&str, i64)])],
    ) -> Result<Self> {
        let n = space.dim();
        let element = |terms: &[(&str, i64)]| -> Result<Element> {
            let mut e = Element::zero();
            for (name, c) in terms {
                e.add_term(space.index_of(name)?, &Scalar::from_int(*c, order));
            }
            Ok(e)
        };
        let mut d = MultilinearMap::new(1, n, n, 1);
        for (x, out) in differential {
            d.add_entry(&[space.index_of(x)?], &element(out)?)?;
        }
        let mut b = MultilinearMap::new(2, n, n, 0);
        for ((x, y), out) in bracket {
            b.add_entry(&[space.index_of(x)?, space.index_of(y)?], &element(out)?)?;
        }
        Self::new(space, flavor, order, d, b)
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn differential(&self) -> &MultilinearMap {
        &self.differential
    }

    pub fn bracket(&self) -> &MultilinearMap {
        &self.bracket
    }

    pub fn basis(&self, i: usize) -> Element {
        Element::basis(i, self.order)
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.space.degree(i)
    }

    pub fn d(&self, x: &Element) -> Element {
        self.differential.apply(&[x]).expect("element in the space")
    }

    pub fn br(&self, x: &Element, y: &Element) -> Element {
        self.bracket.apply(&[x, y]).expect("elements in the space")
    }

    /// True when every structure constant is a plain rational.
    pub fn is_constant(&self) -> bool {
        [&self.differential, &self.bracket]
            .iter()
            .all(|m| m.entries().all(|(_, v)| v.iter().all(|(_, c)| c.is_constant())))
    }

    pub fn add_differential_term(&mut self, input: usize, value: &Element) -> Result<()> {
        let mut d = self.differential.clone();
        d.add_entry(&[input], value)?;
        let deg = self.space.degrees();
        d.check_degrees(&deg, &deg)?;
        self.differential = d;
        Ok(())
    }

    pub fn add_bracket_term(&mut self, left: usize, right: usize, value: &Element) -> Result<()> {
        let mut b = self.bracket.clone();
        b.add_entry(&[left, right], value)?;
        let deg = self.space.degrees();
        b.check_degrees(&deg, &deg)?;
        self.bracket = b;
        Ok(())
    }

    /// Letter degrees `|x| - 1` of the coalgebra built on `V[-1]`.
    pub fn letter_degrees(&self) -> Vec<i64> {
        self.space.degrees().into_iter().map(|d| d - 1).collect()
    }

    /// The coalgebra that encodes this structure: symmetric for Lie, tensor
    /// for Leibniz, in both cases on `V[-1]`.
    pub fn coalgebra(&self) -> Coalgebra {
        match self.flavor {
            Flavor::Lie => Coalgebra::symmetric(self.letter_degrees()),
            Flavor::Leibniz => Coalgebra::tensor(self.letter_degrees()),
        }
    }

    pub fn tensor_coalgebra(&self) -> Coalgebra {
        Coalgebra::tensor(self.letter_degrees())
    }

    pub fn symmetric_coalgebra(&self) -> Coalgebra {
        Coalgebra::symmetric(self.letter_degrees())
    }

    /// `Q_1(x) = (-1)^{|x|} dx`.
    pub fn taylor_q1(&self) -> MultilinearMap {
        let n = self.dim();
        let mut q1 = MultilinearMap::new(1, n, n, 1);
        for i in 0..n {
            let v = self.differential.eval_basis(&[i]).signed(parity_sign(self.degree(i)));
            q1.add_entry(&[i], &v).expect("in range");
        }
        q1
    }

    /// `Q_2(x, y) = (-1)^{|x|(|y| - 1)} [x, y]` as a map on tensor words.
    pub fn taylor_q2(&self) -> MultilinearMap {
        let n = self.dim();
        let mut q2 = MultilinearMap::new(2, n, n, 1);
        for i in 0..n {
            for j in 0..n {
                let sign = parity_sign(self.degree(i) * (self.degree(j) - 1));
                let v = self.bracket.eval_basis(&[i, j]).signed(sign);
                q2.add_entry(&[i, j], &v).expect("in range");
            }
        }
        q2
    }

    /// `Q_2` on symmetric words, read off canonical pairs.
    pub fn taylor_q2_symmetric(&self) -> MultilinearMap {
        let n = self.dim();
        let letters = self.letter_degrees();
        let full = self.taylor_q2();
        let mut q2 = MultilinearMap::symmetric(2, letters.clone(), n, 1);
        let coalg = Coalgebra::symmetric(letters);
        for w in coalg.basis_words(2) {
            q2.add_entry(&w, &full.eval_basis(&w)).expect("canonical pair");
        }
        q2
    }

    fn operator_on(&self, coalg: Coalgebra) -> CoalgebraOperator {
        let q2 = match coalg.kind() {
            CoalgebraKind::Tensor => self.taylor_q2(),
            CoalgebraKind::Symmetric => self.taylor_q2_symmetric(),
        };
        CoalgebraOperator::coderivation(coalg, 1, BTreeMap::from([(1, self.taylor_q1()), (2, q2)]))
            .expect("structure maps have consistent degrees")
    }

    /// The degree-1 coderivation with Taylor coefficients `Q_1`, `Q_2`.
    pub fn to_coderivation(&self) -> CoalgebraOperator {
        self.operator_on(self.coalgebra())
    }

    /// The coderivation on the tensor coalgebra, whatever the flavor.
    pub fn tensor_coderivation(&self) -> CoalgebraOperator {
        self.operator_on(self.tensor_coalgebra())
    }

    pub fn symmetric_coderivation(&self) -> CoalgebraOperator {
        self.operator_on(self.symmetric_coalgebra())
    }

    /// Checks `d^2 = 0`, the derivation rule, the Jacobi-Leibniz identity
    /// (and graded antisymmetry for Lie structures) on all basis tuples, and
    /// `Q^2 = 0` on tensor words of length at most 3.
    pub fn check_structure(&self) -> StructureReport {
        let n = self.dim();
        let mut d_squared = CheckReport::new("d^2 = 0");
        let mut derivation = CheckReport::new("derivation rule");
        let mut jacobi = CheckReport::new("Jacobi-Leibniz identity");
        for i in 0..n {
            let x = self.basis(i);
            d_squared.record_element(&[i], self.d(&self.d(&x)));
        }
        for i in 0..n {
            let x = self.basis(i);
            for j in 0..n {
                let y = self.basis(j);
                let mut r = self.d(&self.br(&x, &y));
                r.sub_assign(&self.br(&self.d(&x), &y));
                r.sub_assign(&self.br(&x, &self.d(&y)).signed(parity_sign(self.degree(i))));
                derivation.record_element(&[i, j], r);
            }
        }
        for i in 0..n {
            let x = self.basis(i);
            for j in 0..n {
                let y = self.basis(j);
                for k in 0..n {
                    let z = self.basis(k);
                    let mut r = self.br(&x, &self.br(&y, &z));
                    r.sub_assign(&self.br(&self.br(&x, &y), &z));
                    let s = parity_sign(self.degree(i) * self.degree(j));
                    r.sub_assign(&self.br(&y, &self.br(&x, &z)).signed(s));
                    jacobi.record_element(&[i, j, k], r);
                }
            }
        }
        let antisymmetry = (self.flavor == Flavor::Lie).then(|| {
            let mut rep = CheckReport::new("graded antisymmetry");
            for i in 0..n {
                for j in 0..n {
                    let s = parity_sign(self.degree(i) * self.degree(j));
                    let r = self
                        .br(&self.basis(i), &self.basis(j))
                        .add(&self.br(&self.basis(j), &self.basis(i)).signed(s));
                    rep.record_element(&[i, j], r);
                }
            }
            rep
        });

        let q = self.tensor_coderivation();
        let mut square = CheckReport::new("Q^2 = 0 on the tensor coalgebra");
        let mut projected_failures: BTreeSet<Vec<usize>> = BTreeSet::new();
        for w in q.source().basis_words_up_to(3) {
            let sq = square_on(&q, &w);
            if !sq.project_to_generators().is_zero() {
                projected_failures.insert(w.clone());
            }
            square.record_words(&w, sq);
        }
        let identity_failures: BTreeSet<Vec<usize>> = [&d_squared, &derivation, &jacobi]
            .iter()
            .flat_map(|r| r.failures.iter().map(|f| f.word.clone()))
            .collect();
        let failures_match = identity_failures == projected_failures;

        let symmetric_square = (self.flavor == Flavor::Lie).then(|| {
            let qs = self.symmetric_coderivation();
            let mut rep = CheckReport::new("Q^2 = 0 on the symmetric coalgebra");
            for w in qs.source().basis_words_up_to(3) {
                rep.record_words(&w, square_on(&qs, &w));
            }
            rep
        });

        StructureReport {
            d_squared,
            derivation,
            jacobi,
            antisymmetry,
            square,
            symmetric_square,
            failures_match,
        }
    }

    fn check_degree_one(&self, alpha: &Element) -> Result<()> {
        for (i, _) in alpha.iter() {
            if i >= self.dim() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    dim: self.dim(),
                });
            }
            if self.degree(i) != 1 {
                return Err(Error::Degree(format!(
                    "Maurer-Cartan candidate has a component on {} of degree {}",
                    self.space.name(i),
                    self.degree(i)
                )));
            }
        }
        Ok(())
    }

    /// `d_α = [α, ·] - d`.
    pub fn d_alpha(&self, alpha: &Element, x: &Element) -> Element {
        self.br(alpha, x).sub(&self.d(x))
    }

    /// `dα - 1/2 [α, α]` together with both conditions of the twisting lemma.
    pub fn mc_check(&self, alpha: &Element) -> Result<McReport> {
        self.check_degree_one(alpha)?;
        let half = Scalar::from_rational(rational(1, 2), self.order);
        let residual = self.d(alpha).sub(&self.br(alpha, alpha).scale(&half));
        let mut d_alpha_squared = CheckReport::new("(d_alpha)^2 = 0");
        let mut residual_bracket = CheckReport::new("[MC residual, x] = 0");
        for i in 0..self.dim() {
            let x = self.basis(i);
            d_alpha_squared.record_element(&[i], self.d_alpha(alpha, &self.d_alpha(alpha, &x)));
            residual_bracket.record_element(&[i], self.br(&residual, &x));
        }
        Ok(McReport {
            residual,
            d_alpha_squared,
            residual_bracket,
        })
    }

    /// Solves `dα = 1/2 [α, α]` order by order in `t`, starting from the
    /// closed degree-1 vector `first_order` as the `t^1` coefficient. Free
    /// directions at higher orders are set to zero.
    pub fn solve_mc(&self, first_order: &Element) -> Result<Element> {
        self.check_degree_one(first_order)?;
        if !self.is_constant() || !first_order.iter().all(|(_, c)| c.is_constant()) {
            return Err(Error::Config("the order-by-order solver needs t-free data".into()));
        }
        if !self.d(first_order).is_zero() {
            return Err(Error::Obstruction("the first-order term is not closed".into()));
        }
        let k_max = self.order;
        let ones: Vec<usize> = (0..self.dim()).filter(|&i| self.degree(i) == 1).collect();
        let twos: Vec<usize> = (0..self.dim()).filter(|&i| self.degree(i) == 2).collect();
        let mut layers: Vec<Element> = vec![Element::zero(), first_order.clone()];
        for k in 2..k_max as usize {
            let mut rhs = Element::zero();
            for a in 1..k {
                rhs.add_assign(&self.br(&layers[a], &layers[k - a]));
            }
            let rhs = rhs.scale(&Scalar::from_rational(rational(1, 2), self.order));
            let mut equations = Vec::with_capacity(twos.len());
            for &o in &twos {
                let mut coeffs = BTreeMap::new();
                for (v, &i) in ones.iter().enumerate() {
                    let c = self.differential.eval_basis(&[i]).get(o).map(|s| s.coeff(0));
                    if let Some(c) = c {
                        coeffs.insert(v, c);
                    }
                }
                let target = rhs.get(o).map(|s| s.coeff(0)).unwrap_or_else(BigRational::zero);
                equations.push(LinearEquation::new(coeffs, target));
            }
            match solve_linear_system(ones.len(), &equations) {
                LinearSolution::Solved(x) => {
                    let layer = Element::from_terms(
                        ones.iter()
                            .zip(x)
                            .map(|(&i, q)| (i, Scalar::from_rational(q, self.order))),
                    );
                    layers.push(layer);
                }
                LinearSolution::Inconsistent { .. } => {
                    return Err(Error::Obstruction(format!(
                        "the Maurer-Cartan equation has no solution at order t^{k}"
                    )));
                }
            }
        }
        let mut alpha = Element::zero();
        for (k, layer) in layers.iter().enumerate().skip(1) {
            if (k as u32) < k_max {
                alpha.add_assign(&layer.scale(&Scalar::monomial(rational(1, 1), k as u32, self.order)));
            }
        }
        Ok(alpha)
    }

    /// The derived structure `(V[1], [·,·]_α, d_α)` with
    /// `[x, y]_α = [(-1)^{|x|} d_α(x), y]`; it is always of Leibniz flavor.
    pub fn derived_structure(&self, alpha: &Element) -> Result<AlgebraStructure> {
        let mc = self.mc_check(alpha)?;
        if !mc.twisting_allowed() {
            return Err(Error::NotMaurerCartan(
                "(d_alpha)^2 does not vanish on every basis vector".into(),
            ));
        }
        let n = self.dim();
        let mut d = MultilinearMap::new(1, n, n, 1);
        let mut b = MultilinearMap::new(2, n, n, 0);
        for i in 0..n {
            let dx = self.d_alpha(alpha, &self.basis(i));
            d.add_entry(&[i], &dx)?;
            let lead = dx.signed(parity_sign(self.degree(i)));
            for j in 0..n {
                b.add_entry(&[i, j], &self.br(&lead, &self.basis(j)))?;
            }
        }
        AlgebraStructure::new(self.space.shifted(1), Flavor::Leibniz, self.order, d, b)
    }

    /// The symmetric coderivation with coefficients `(Q_{α,1}, Q_2)`, where
    /// `Q_{α,1}(x) = Q_1(x) + Q_2(x, α)`.
    pub fn twisted_symmetric_coderivation(&self, alpha: &Element) -> Result<CoalgebraOperator> {
        self.check_degree_one(alpha)?;
        let n = self.dim();
        let q1 = self.taylor_q1();
        let q2 = self.taylor_q2();
        let mut qa1 = MultilinearMap::new(1, n, n, 1);
        for i in 0..n {
            let v = q1.eval_basis(&[i]).add(&q2.apply(&[&self.basis(i), alpha])?);
            qa1.add_entry(&[i], &v)?;
        }
        CoalgebraOperator::coderivation(
            self.symmetric_coalgebra(),
            1,
            BTreeMap::from([(1, qa1), (2, self.taylor_q2_symmetric())]),
        )
    }

    /// Checks `Q(x e^α) = Q_α(x) e^α` on symmetric words of length at most
    /// `max_len`, with `e^α` including the unit and `Q_α` as in
    /// [`Self::twisted_symmetric_coderivation`].
    pub fn exp_twist_check(&self, alpha: &Element, max_len: usize) -> Result<CheckReport> {
        let coalg = self.symmetric_coalgebra();
        let e = coalg.group_like_exp(alpha, self.order, None)?;
        let q = self.symmetric_coderivation();
        let qa = self.twisted_symmetric_coderivation(alpha)?;
        let mut rep = CheckReport::new("Q(x e^alpha) = Q_alpha(x) e^alpha");
        for w in coalg.basis_words_up_to(max_len) {
            let x = coalg.word(&w, self.order);
            let mut arg = x.clone();
            arg.add_assign(&coalg.product(&x, &e));
            let qx = qa.evaluate_word(&w);
            let mut rhs = qx.clone();
            rhs.add_assign(&coalg.product(&qx, &e));
            rep.record_words(&w, q.evaluate(&arg).sub(&rhs));
        }
        Ok(rep)
    }

    /// Checks `Q_{α,1}(x) = Q_1(x) + Q_2(x, α)` on every basis vector, where
    /// `Q_{α,1}` is the linear coefficient of the derived structure.
    pub fn bridge_check(&self, derived: &AlgebraStructure, alpha: &Element) -> CheckReport {
        let q1 = self.taylor_q1();
        let q2 = self.taylor_q2();
        let qa1 = derived.taylor_q1();
        let mut rep = CheckReport::new("Q_{alpha,1}(x) = Q_1(x) + Q_2(x, alpha)");
        for i in 0..self.dim() {
            let x = self.basis(i);
            let rhs = q1.eval_basis(&[i]).add(&q2.apply(&[&x, alpha]).expect("in range"));
            rep.record_element(&[i], qa1.eval_basis(&[i]).sub(&rhs));
        }
        rep
    }
}
