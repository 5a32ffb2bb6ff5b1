//! Minimal reverse-mode autodiff over `Array2<f64>`.
//!
//! Every differentiable path in the toolkit — prompt refinement, multi-center
//! classification, projection heads, contrastive alignment, the KL objectives —
//! is expressed as a graph of these ops, so training and inference share one
//! forward implementation and the backward pass can be checked against central
//! finite differences in one place.
//!
//! Vectors are 1×d rows, scalars are 1×1 matrices. Graphs are built per batch
//! and thrown away; parameters live outside the graph and are copied in as
//! `param` leaves, with gradients read back by [`Graph::backward`].

use ndarray::prelude::*;

/// Handle to a node in a [`Graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Var(usize);

enum Op {
    Constant,
    Param,
    Add(usize, usize),
    /// matrix (n×d) + row (1×d), broadcast over rows
    AddRow(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    /// matrix (n×d) ⊙ column (n×1), broadcast over columns
    MulCol(usize, usize),
    /// matrix × scalar variable (1×1)
    MulScalarVar(usize, usize),
    Scale(usize, f64),
    MatMul(usize, usize),
    Transpose(usize),
    Tanh(usize),
    Sigmoid(usize),
    RowSoftmax(usize),
    RowLogSoftmax(usize),
    /// L2-normalize each row
    RowNormalize(usize),
    /// per-row max over columns, n×d → n×1; gradient routes to the lowest
    /// argmax index on ties
    RowMax(usize),
    RowSum(usize),
    SumAll(usize),
    GatherRows(usize, Vec<usize>),
    ConcatRows(Vec<usize>),
    ConcatCols(Vec<usize>),
}

struct Node {
    value: Array2<f64>,
    op: Op,
}

/// A build-once, backward-once computation tape.
#[derive(Default)]
pub struct Graph {
    nodes: Vec<Node>,
}

/// Gradients of one scalar output with respect to every graph node.
pub struct Gradients {
    grads: Vec<Option<Array2<f64>>>,
    shapes: Vec<(usize, usize)>,
}

impl Gradients {
    /// Gradient w.r.t. `v`; zero matrix when `v` does not influence the loss.
    pub fn wrt(&self, v: Var) -> Array2<f64> {
        match &self.grads[v.0] {
            Some(g) => g.clone(),
            None => Array2::zeros(self.shapes[v.0]),
        }
    }
}

impl Graph {
    pub fn new() -> Self {
        Graph { nodes: Vec::new() }
    }

    fn push(&mut self, value: Array2<f64>, op: Op) -> Var {
        self.nodes.push(Node { value, op });
        Var(self.nodes.len() - 1)
    }

    fn val(&self, v: Var) -> &Array2<f64> {
        &self.nodes[v.0].value
    }

    /// Forward value of a node.
    pub fn value(&self, v: Var) -> &Array2<f64> {
        self.val(v)
    }

    /// Forward value of a 1×1 node as a scalar.
    pub fn scalar(&self, v: Var) -> f64 {
        let m = self.val(v);
        assert_eq!(m.dim(), (1, 1), "scalar() on non-1x1 node");
        m[(0, 0)]
    }

    pub fn constant(&mut self, value: Array2<f64>) -> Var {
        self.push(value, Op::Constant)
    }

    pub fn constant_row(&mut self, value: &Array1<f64>) -> Var {
        let row = value.view().insert_axis(Axis(0)).to_owned();
        self.push(row, Op::Constant)
    }

    pub fn param(&mut self, value: &Array2<f64>) -> Var {
        self.push(value.clone(), Op::Param)
    }

    pub fn add(&mut self, a: Var, b: Var) -> Var {
        assert_eq!(self.val(a).dim(), self.val(b).dim(), "add shape mismatch");
        let v = self.val(a) + self.val(b);
        self.push(v, Op::Add(a.0, b.0))
    }

    pub fn add_row(&mut self, m: Var, row: Var) -> Var {
        let (_, d) = self.val(m).dim();
        assert_eq!(self.val(row).dim(), (1, d), "add_row shape mismatch");
        let v = self.val(m) + &self.val(row).row(0);
        self.push(v, Op::AddRow(m.0, row.0))
    }

    pub fn sub(&mut self, a: Var, b: Var) -> Var {
        assert_eq!(self.val(a).dim(), self.val(b).dim(), "sub shape mismatch");
        let v = self.val(a) - self.val(b);
        self.push(v, Op::Sub(a.0, b.0))
    }

    pub fn mul(&mut self, a: Var, b: Var) -> Var {
        assert_eq!(self.val(a).dim(), self.val(b).dim(), "mul shape mismatch");
        let v = self.val(a) * self.val(b);
        self.push(v, Op::Mul(a.0, b.0))
    }

    pub fn mul_col(&mut self, m: Var, col: Var) -> Var {
        let (n, _) = self.val(m).dim();
        assert_eq!(self.val(col).dim(), (n, 1), "mul_col shape mismatch");
        let v = self.val(m) * &self.val(col).column(0).insert_axis(Axis(1));
        self.push(v, Op::MulCol(m.0, col.0))
    }

    pub fn mul_scalar_var(&mut self, m: Var, s: Var) -> Var {
        assert_eq!(self.val(s).dim(), (1, 1), "mul_scalar_var needs 1x1 scalar");
        let v = self.val(m) * self.val(s)[(0, 0)];
        self.push(v, Op::MulScalarVar(m.0, s.0))
    }

    pub fn scale(&mut self, a: Var, c: f64) -> Var {
        let v = self.val(a) * c;
        self.push(v, Op::Scale(a.0, c))
    }

    pub fn matmul(&mut self, a: Var, b: Var) -> Var {
        let (_, k1) = self.val(a).dim();
        let (k2, _) = self.val(b).dim();
        assert_eq!(k1, k2, "matmul inner dimension mismatch");
        let v = self.val(a).dot(self.val(b));
        self.push(v, Op::MatMul(a.0, b.0))
    }

    pub fn transpose(&mut self, a: Var) -> Var {
        let v = self.val(a).t().to_owned();
        self.push(v, Op::Transpose(a.0))
    }

    pub fn tanh(&mut self, a: Var) -> Var {
        let v = self.val(a).mapv(f64::tanh);
        self.push(v, Op::Tanh(a.0))
    }

    pub fn sigmoid(&mut self, a: Var) -> Var {
        let v = self.val(a).mapv(|x| 1.0 / (1.0 + (-x).exp()));
        self.push(v, Op::Sigmoid(a.0))
    }

    pub fn row_softmax(&mut self, a: Var) -> Var {
        let v = row_softmax(self.val(a));
        self.push(v, Op::RowSoftmax(a.0))
    }

    pub fn row_log_softmax(&mut self, a: Var) -> Var {
        let v = row_log_softmax(self.val(a));
        self.push(v, Op::RowLogSoftmax(a.0))
    }

    pub fn row_normalize(&mut self, a: Var) -> Var {
        let mut v = self.val(a).clone();
        for mut row in v.rows_mut() {
            let norm = row.dot(&row).sqrt();
            debug_assert!(norm > 0.0, "row_normalize on zero row");
            row.mapv_inplace(|x| x / norm);
        }
        self.push(v, Op::RowNormalize(a.0))
    }

    pub fn row_max(&mut self, a: Var) -> Var {
        let src = self.val(a);
        let (n, d) = src.dim();
        assert!(d > 0, "row_max on empty rows");
        let mut v = Array2::zeros((n, 1));
        for i in 0..n {
            let mut best = src[(i, 0)];
            for j in 1..d {
                if src[(i, j)] > best {
                    best = src[(i, j)];
                }
            }
            v[(i, 0)] = best;
        }
        self.push(v, Op::RowMax(a.0))
    }

    pub fn row_sum(&mut self, a: Var) -> Var {
        let v = self
            .val(a)
            .sum_axis(Axis(1))
            .insert_axis(Axis(1))
            .to_owned();
        self.push(v, Op::RowSum(a.0))
    }

    pub fn sum_all(&mut self, a: Var) -> Var {
        let v = Array2::from_elem((1, 1), self.val(a).sum());
        self.push(v, Op::SumAll(a.0))
    }

    pub fn gather_rows(&mut self, a: Var, idx: &[usize]) -> Var {
        let src = self.val(a);
        let (n, d) = src.dim();
        assert!(idx.iter().all(|&i| i < n), "gather_rows index out of range");
        let mut v = Array2::zeros((idx.len(), d));
        for (k, &i) in idx.iter().enumerate() {
            v.row_mut(k).assign(&src.row(i));
        }
        self.push(v, Op::GatherRows(a.0, idx.to_vec()))
    }

    pub fn concat_rows(&mut self, parts: &[Var]) -> Var {
        assert!(!parts.is_empty());
        let d = self.val(parts[0]).ncols();
        let n: usize = parts.iter().map(|&p| self.val(p).nrows()).sum();
        let mut v = Array2::zeros((n, d));
        let mut at = 0;
        for &p in parts {
            let m = self.val(p);
            assert_eq!(m.ncols(), d, "concat_rows width mismatch");
            v.slice_mut(s![at..at + m.nrows(), ..]).assign(m);
            at += m.nrows();
        }
        self.push(v, Op::ConcatRows(parts.iter().map(|p| p.0).collect()))
    }

    pub fn concat_cols(&mut self, parts: &[Var]) -> Var {
        assert!(!parts.is_empty());
        let n = self.val(parts[0]).nrows();
        let d: usize = parts.iter().map(|&p| self.val(p).ncols()).sum();
        let mut v = Array2::zeros((n, d));
        let mut at = 0;
        for &p in parts {
            let m = self.val(p);
            assert_eq!(m.nrows(), n, "concat_cols height mismatch");
            v.slice_mut(s![.., at..at + m.ncols()]).assign(m);
            at += m.ncols();
        }
        self.push(v, Op::ConcatCols(parts.iter().map(|p| p.0).collect()))
    }

    /// Mean of all entries, as a 1×1 scalar node.
    pub fn mean_all(&mut self, a: Var) -> Var {
        let count = self.val(a).len() as f64;
        let s = self.sum_all(a);
        self.scale(s, 1.0 / count)
    }

    /// Backpropagate from a 1×1 `loss` node.
    pub fn backward(&self, loss: Var) -> Gradients {
        assert_eq!(self.val(loss).dim(), (1, 1), "backward needs a scalar loss");
        let mut grads: Vec<Option<Array2<f64>>> = vec![None; self.nodes.len()];
        grads[loss.0] = Some(Array2::from_elem((1, 1), 1.0));

        for i in (0..self.nodes.len()).rev() {
            let g = match grads[i].take() {
                Some(g) => g,
                None => continue,
            };
            match &self.nodes[i].op {
                Op::Constant | Op::Param => {
                    grads[i] = Some(g);
                    continue;
                }
                Op::Add(a, b) => {
                    accumulate(&mut grads[*a], &g);
                    accumulate(&mut grads[*b], &g);
                }
                Op::AddRow(m, r) => {
                    accumulate(&mut grads[*m], &g);
                    let row_grad = g.sum_axis(Axis(0)).insert_axis(Axis(0));
                    accumulate(&mut grads[*r], &row_grad);
                }
                Op::Sub(a, b) => {
                    accumulate(&mut grads[*a], &g);
                    accumulate(&mut grads[*b], &(-&g));
                }
                Op::Mul(a, b) => {
                    let ga = &g * &self.nodes[*b].value;
                    let gb = &g * &self.nodes[*a].value;
                    accumulate(&mut grads[*a], &ga);
                    accumulate(&mut grads[*b], &gb);
                }
                Op::MulCol(m, c) => {
                    let col = self.nodes[*c].value.column(0).insert_axis(Axis(1));
                    let gm = &g * &col;
                    let gc = (&g * &self.nodes[*m].value)
                        .sum_axis(Axis(1))
                        .insert_axis(Axis(1));
                    accumulate(&mut grads[*m], &gm);
                    accumulate(&mut grads[*c], &gc);
                }
                Op::MulScalarVar(m, sv) => {
                    let s = self.nodes[*sv].value[(0, 0)];
                    accumulate(&mut grads[*m], &(&g * s));
                    let gs = (&g * &self.nodes[*m].value).sum();
                    accumulate(&mut grads[*sv], &Array2::from_elem((1, 1), gs));
                }
                Op::Scale(a, c) => {
                    accumulate(&mut grads[*a], &(&g * *c));
                }
                Op::MatMul(a, b) => {
                    let ga = g.dot(&self.nodes[*b].value.t());
                    let gb = self.nodes[*a].value.t().dot(&g);
                    accumulate(&mut grads[*a], &ga);
                    accumulate(&mut grads[*b], &gb);
                }
                Op::Transpose(a) => {
                    accumulate(&mut grads[*a], &g.t().to_owned());
                }
                Op::Tanh(a) => {
                    let y = &self.nodes[i].value;
                    let ga = &g * &y.mapv(|t| 1.0 - t * t);
                    accumulate(&mut grads[*a], &ga);
                }
                Op::Sigmoid(a) => {
                    let y = &self.nodes[i].value;
                    let ga = &g * &y.mapv(|s| s * (1.0 - s));
                    accumulate(&mut grads[*a], &ga);
                }
                Op::RowSoftmax(a) => {
                    let y = &self.nodes[i].value;
                    let mut ga = Array2::zeros(y.dim());
                    for r in 0..y.nrows() {
                        let yr = y.row(r);
                        let gr = g.row(r);
                        let dot = yr.dot(&gr);
                        for c in 0..y.ncols() {
                            ga[(r, c)] = yr[c] * (gr[c] - dot);
                        }
                    }
                    accumulate(&mut grads[*a], &ga);
                }
                Op::RowLogSoftmax(a) => {
                    let y = &self.nodes[i].value; // log-probabilities
                    let mut ga = Array2::zeros(y.dim());
                    for r in 0..y.nrows() {
                        let gsum: f64 = g.row(r).sum();
                        for c in 0..y.ncols() {
                            ga[(r, c)] = g[(r, c)] - y[(r, c)].exp() * gsum;
                        }
                    }
                    accumulate(&mut grads[*a], &ga);
                }
                Op::RowNormalize(a) => {
                    let x = &self.nodes[*a].value;
                    let y = &self.nodes[i].value;
                    let mut ga = Array2::zeros(y.dim());
                    for r in 0..y.nrows() {
                        let norm = x.row(r).dot(&x.row(r)).sqrt();
                        let dot = y.row(r).dot(&g.row(r));
                        for c in 0..y.ncols() {
                            ga[(r, c)] = (g[(r, c)] - y[(r, c)] * dot) / norm;
                        }
                    }
                    accumulate(&mut grads[*a], &ga);
                }
                Op::RowMax(a) => {
                    let x = &self.nodes[*a].value;
                    let mut ga = Array2::zeros(x.dim());
                    for r in 0..x.nrows() {
                        let mut arg = 0;
                        for c in 1..x.ncols() {
                            if x[(r, c)] > x[(r, arg)] {
                                arg = c;
                            }
                        }
                        ga[(r, arg)] = g[(r, 0)];
                    }
                    accumulate(&mut grads[*a], &ga);
                }
                Op::RowSum(a) => {
                    let (n, d) = self.nodes[*a].value.dim();
                    let mut ga = Array2::zeros((n, d));
                    for r in 0..n {
                        ga.row_mut(r).fill(g[(r, 0)]);
                    }
                    accumulate(&mut grads[*a], &ga);
                }
                Op::SumAll(a) => {
                    let ga = Array2::from_elem(self.nodes[*a].value.dim(), g[(0, 0)]);
                    accumulate(&mut grads[*a], &ga);
                }
                Op::GatherRows(a, idx) => {
                    let mut ga = Array2::zeros(self.nodes[*a].value.dim());
                    for (k, &src_row) in idx.iter().enumerate() {
                        let mut dst = ga.row_mut(src_row);
                        dst += &g.row(k);
                    }
                    accumulate(&mut grads[*a], &ga);
                }
                Op::ConcatRows(parts) => {
                    let mut at = 0;
                    for &p in parts {
                        let h = self.nodes[p].value.nrows();
                        let slice = g.slice(s![at..at + h, ..]).to_owned();
                        accumulate(&mut grads[p], &slice);
                        at += h;
                    }
                }
                Op::ConcatCols(parts) => {
                    let mut at = 0;
                    for &p in parts {
                        let w = self.nodes[p].value.ncols();
                        let slice = g.slice(s![.., at..at + w]).to_owned();
                        accumulate(&mut grads[p], &slice);
                        at += w;
                    }
                }
            }
        }

        let shapes = self.nodes.iter().map(|n| n.value.dim()).collect();
        Gradients { grads, shapes }
    }
}

fn accumulate(slot: &mut Option<Array2<f64>>, g: &Array2<f64>) {
    match slot {
        Some(acc) => *acc += g,
        None => *slot = Some(g.clone()),
    }
}

/// Numerically stable row-wise softmax on a plain array.
pub fn row_softmax(x: &Array2<f64>) -> Array2<f64> {
    let mut out = x.clone();
    for mut row in out.rows_mut() {
        let max = row.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        row.mapv_inplace(|v| (v - max).exp());
        let sum = row.sum();
        row.mapv_inplace(|v| v / sum);
    }
    out
}

/// Numerically stable row-wise log-softmax on a plain array.
pub fn row_log_softmax(x: &Array2<f64>) -> Array2<f64> {
    let mut out = x.clone();
    for mut row in out.rows_mut() {
        let max = row.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let lse = max + row.fold(0.0, |a, &b| a + (b - max).exp()).ln();
        row.mapv_inplace(|v| v - lse);
    }
    out
}

/// SGD with classical momentum: v ← μ·v + g, p ← p − lr·v.
pub struct SgdMomentum {
    pub lr: f64,
    pub momentum: f64,
    velocity: Vec<Array2<f64>>,
}

impl SgdMomentum {
    pub fn new(lr: f64, momentum: f64) -> Self {
        SgdMomentum {
            lr,
            momentum,
            velocity: Vec::new(),
        }
    }

    /// Apply one step. `params` and `grads` are position-aligned; the slot
    /// layout must stay stable across calls.
    pub fn step(&mut self, params: &mut [&mut Array2<f64>], grads: &[Array2<f64>]) {
        assert_eq!(params.len(), grads.len());
        if self.velocity.is_empty() {
            self.velocity = params.iter().map(|p| Array2::zeros(p.dim())).collect();
        }
        assert_eq!(self.velocity.len(), params.len(), "parameter slot layout changed");
        for ((p, g), v) in params.iter_mut().zip(grads).zip(&mut self.velocity) {
            *v *= self.momentum;
            *v += g;
            **p -= &(&*v * self.lr);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    // Central-difference oracle: perturbs one entry of `p`, re-runs `f`.
    fn fd_grad(p: &Array2<f64>, f: &mut dyn FnMut(&Array2<f64>) -> f64) -> Array2<f64> {
        let h = 1e-6;
        let mut out = Array2::zeros(p.dim());
        for idx in 0..p.len() {
            let (r, c) = (idx / p.ncols(), idx % p.ncols());
            let mut plus = p.clone();
            plus[(r, c)] += h;
            let mut minus = p.clone();
            minus[(r, c)] -= h;
            out[(r, c)] = (f(&plus) - f(&minus)) / (2.0 * h);
        }
        out
    }

    fn check_close(a: &Array2<f64>, b: &Array2<f64>, tol: f64) {
        for (x, y) in a.iter().zip(b.iter()) {
            let rel = (x - y).abs() / x.abs().max(y.abs()).max(1.0);
            assert!(rel < tol, "gradients differ: {x} vs {y}");
        }
    }

    fn demo_param() -> Array2<f64> {
        array![[0.3, -0.7, 0.5], [1.1, 0.2, -0.4]]
    }

    #[test]
    fn matmul_chain_matches_finite_differences() {
        let w = demo_param();
        let x = array![[0.5, -1.0], [2.0, 0.1], [0.3, 0.9]];
        let mut f = |w: &Array2<f64>| {
            let mut g = Graph::new();
            let wv = g.param(w);
            let xv = g.constant(x.clone());
            let h = g.matmul(xv, wv);
            let t = g.tanh(h);
            let s = g.sum_all(t);
            g.scalar(s)
        };
        let mut g = Graph::new();
        let wv = g.param(&w);
        let xv = g.constant(x.clone());
        let h = g.matmul(xv, wv);
        let t = g.tanh(h);
        let s = g.sum_all(t);
        let grads = g.backward(s);
        check_close(&grads.wrt(wv), &fd_grad(&w, &mut f), 1e-7);
    }

    #[test]
    fn softmax_and_log_softmax_gradients() {
        let z = demo_param();
        let target = array![[0.2, 0.5, 0.3], [0.6, 0.1, 0.3]];
        let mut f = |z: &Array2<f64>| {
            let mut g = Graph::new();
            let zv = g.param(z);
            let p = g.row_softmax(zv);
            let lp = g.row_log_softmax(zv);
            let t = g.constant(target.clone());
            let prod = g.mul(p, lp);
            let prod2 = g.mul(prod, t);
            let s = g.sum_all(prod2);
            g.scalar(s)
        };
        let mut g = Graph::new();
        let zv = g.param(&z);
        let p = g.row_softmax(zv);
        let lp = g.row_log_softmax(zv);
        let t = g.constant(target.clone());
        let prod = g.mul(p, lp);
        let prod2 = g.mul(prod, t);
        let s = g.sum_all(prod2);
        let grads = g.backward(s);
        check_close(&grads.wrt(zv), &fd_grad(&z, &mut f), 1e-6);
    }

    #[test]
    fn normalize_max_gather_concat_gradients() {
        let w = demo_param();
        let build = |g: &mut Graph, wv: Var| {
            let n = g.row_normalize(wv);
            let picked = g.gather_rows(n, &[1, 0, 1]);
            let m = g.row_max(picked);
            let cat = g.concat_cols(&[m, m]);
            let cat2 = g.concat_rows(&[cat, cat]);
            g.sum_all(cat2)
        };
        let mut f = |w: &Array2<f64>| {
            let mut g = Graph::new();
            let wv = g.param(w);
            let s = build(&mut g, wv);
            g.scalar(s)
        };
        let mut g = Graph::new();
        let wv = g.param(&w);
        let s = build(&mut g, wv);
        let grads = g.backward(s);
        check_close(&grads.wrt(wv), &fd_grad(&w, &mut f), 1e-6);
    }

    #[test]
    fn broadcast_ops_gradients() {
        let w = demo_param();
        let build = |g: &mut Graph, wv: Var| {
            let sig = g.sigmoid(wv);
            let col = g.row_sum(sig);
            let scaled = g.mul_col(sig, col);
            let row = g.gather_rows(wv, &[0]);
            let shifted = g.add_row(scaled, row);
            let sc = g.sum_all(row);
            let all = g.mul_scalar_var(shifted, sc);
            g.mean_all(all)
        };
        let mut f = |w: &Array2<f64>| {
            let mut g = Graph::new();
            let wv = g.param(w);
            let s = build(&mut g, wv);
            g.scalar(s)
        };
        let mut g = Graph::new();
        let wv = g.param(&w);
        let s = build(&mut g, wv);
        let grads = g.backward(s);
        check_close(&grads.wrt(wv), &fd_grad(&w, &mut f), 1e-6);
    }

    #[test]
    fn row_max_ties_route_to_lowest_index() {
        let x = array![[0.5, 0.5, 0.2]];
        let mut g = Graph::new();
        let xv = g.param(&x);
        let m = g.row_max(xv);
        let s = g.sum_all(m);
        let grads = g.backward(s);
        assert_eq!(grads.wrt(xv), array![[1.0, 0.0, 0.0]]);
    }

    #[test]
    fn disconnected_param_gets_zero_gradient() {
        let mut g = Graph::new();
        let a = g.param(&array![[1.0, 2.0]]);
        let b = g.param(&array![[3.0, 4.0]]);
        let s = g.sum_all(a);
        let grads = g.backward(s);
        assert_eq!(grads.wrt(b), Array2::zeros((1, 2)));
    }

    #[test]
    fn sgd_momentum_accumulates_velocity() {
        let mut p = array![[1.0_f64]];
        let g0 = array![[1.0_f64]];
        let mut opt = SgdMomentum::new(0.1, 0.9);
        opt.step(&mut [&mut p], std::slice::from_ref(&g0));
        assert_abs_diff_eq!(p[(0, 0)], 0.9, epsilon = 1e-12);
        opt.step(&mut [&mut p], std::slice::from_ref(&g0));
        // v = 0.9*1 + 1 = 1.9; p = 0.9 - 0.19
        assert_abs_diff_eq!(p[(0, 0)], 0.71, epsilon = 1e-12);
    }

    #[test]
    fn stable_softmax_handles_large_logits() {
        let p = row_softmax(&array![[1000.0, 1000.0, -1000.0]]);
        assert_abs_diff_eq!(p[(0, 0)], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(p.row(0).sum(), 1.0, epsilon = 1e-12);
        let lp = row_log_softmax(&array![[1000.0, 0.0]]);
        assert!(lp[(0, 0)].abs() < 1e-12);
    }
}
