//! Grey-informed neural network: a from-scratch MLP with manual
//! backpropagation, trained full-batch on the composite loss
//!
//! ```text
//! L_total = (1/n) Σ (target_i - pred_i)^2  +  ξ · L_grey
//! ```
//!
//! where `L_grey` compares the network output against a pre-fitted grey
//! model's values g_i (mean absolute error by default, mean squared error
//! optionally). With ξ = 0 the grey path is skipped entirely and training is
//! a plain MLP regression.

use crate::grey::GreyModelFit;
use crate::rng::SplitMix64;
use crate::series::{Error, Result, TimeSeries};

/// Supervised one-step-ahead pairs built from a sliding window of size T.
#[derive(Debug, Clone)]
pub struct WindowDataset {
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
    /// Window size T.
    pub window: usize,
    /// 1-based index in the source series of `targets[0]` (always T + 1).
    pub first_target_index: usize,
}

/// Build the one-step (τ = 1) sliding-window dataset:
/// inputs[i] = [x(i+1), ..., x(i+T)], targets[i] = x(i+T+1).
pub fn build_windows(s: &TimeSeries, window: usize) -> Result<WindowDataset> {
    if window < 1 {
        return Err(Error::Param("window size must be at least 1".into()));
    }
    if s.len() < window + 1 {
        return Err(Error::TooShort {
            need: window + 1,
            got: s.len(),
        });
    }
    let v = s.values();
    let n_samples = s.len() - window;
    let mut inputs = Vec::with_capacity(n_samples);
    let mut targets = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        inputs.push(v[i..i + window].to_vec());
        targets.push(v[i + window]);
    }
    Ok(WindowDataset {
        inputs,
        targets,
        window,
        first_target_index: window + 1,
    })
}

/// Hidden-layer activation; the output layer is always identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Relu,
    Sigmoid,
}

impl Activation {
    fn apply(&self, z: f64) -> f64 {
        match self {
            Activation::Tanh => z.tanh(),
            Activation::Relu => z.max(0.0),
            Activation::Sigmoid => 1.0 / (1.0 + (-z).exp()),
        }
    }

    /// Derivative expressed through the activation value a = apply(z).
    fn derivative_from_output(&self, a: f64) -> f64 {
        match self {
            Activation::Tanh => 1.0 - a * a,
            Activation::Relu => {
                if a > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Sigmoid => a * (1.0 - a),
        }
    }
}

/// MLP parameters: per-layer weight matrices (row-major, out x in) and biases.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpState {
    pub layer_sizes: Vec<usize>,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
    pub activation: Activation,
    pub rng_seed: u64,
}

impl MlpState {
    /// Initialize with Glorot-uniform weights (±sqrt(6/(fan_in+fan_out)))
    /// and zero biases, driven by a SplitMix64 generator.
    pub fn init(layer_sizes: Vec<usize>, activation: Activation, seed: u64) -> Result<Self> {
        if layer_sizes.len() < 2 {
            return Err(Error::Param("network needs input and output layers".into()));
        }
        if *layer_sizes.last().unwrap() != 1 {
            return Err(Error::Param("output layer must have exactly 1 unit".into()));
        }
        if layer_sizes.contains(&0) {
            return Err(Error::Param("layer sizes must be positive".into()));
        }
        let mut rng = SplitMix64::new(seed);
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for pair in layer_sizes.windows(2) {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            weights.push(
                (0..fan_in * fan_out)
                    .map(|_| rng.uniform(-limit, limit))
                    .collect(),
            );
            biases.push(vec![0.0; fan_out]);
        }
        Ok(Self {
            layer_sizes,
            weights,
            biases,
            activation,
            rng_seed: seed,
        })
    }

    pub fn input_size(&self) -> usize {
        self.layer_sizes[0]
    }

    fn num_layers(&self) -> usize {
        self.layer_sizes.len() - 1
    }

    /// Forward pass returning the activations of every layer (input included).
    /// The final layer uses the identity activation.
    fn forward_cached(&self, window: &[f64]) -> Result<Vec<Vec<f64>>> {
        if window.len() != self.input_size() {
            return Err(Error::Shape(format!(
                "input length {} does not match input layer size {}",
                window.len(),
                self.input_size()
            )));
        }
        let mut acts = vec![window.to_vec()];
        for l in 0..self.num_layers() {
            let (nin, nout) = (self.layer_sizes[l], self.layer_sizes[l + 1]);
            let prev = &acts[l];
            let mut out = Vec::with_capacity(nout);
            for o in 0..nout {
                let mut z = self.biases[l][o];
                let row = &self.weights[l][o * nin..(o + 1) * nin];
                for (w, a) in row.iter().zip(prev) {
                    z += w * a;
                }
                out.push(if l + 1 == self.num_layers() {
                    z
                } else {
                    self.activation.apply(z)
                });
            }
            acts.push(out);
        }
        Ok(acts)
    }

    /// Scalar prediction for one input window.
    pub fn forward(&self, window: &[f64]) -> Result<f64> {
        Ok(self.forward_cached(window)?.last().unwrap()[0])
    }

    fn all_finite(&self) -> bool {
        self.weights.iter().flatten().all(|w| w.is_finite())
            && self.biases.iter().flatten().all(|b| b.is_finite())
    }
}

/// Which form the grey error term takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreyTermForm {
    /// (1/n) Σ |pred_i - g_i| — the default.
    Mae,
    /// (1/n) Σ (pred_i - g_i)^2
    Mse,
}

/// Configuration of the composite grey-informed loss.
#[derive(Debug, Clone)]
pub struct GreyInformedLossConfig {
    /// Weighting coefficient ξ in [0, 1].
    pub xi: f64,
    pub grey_term_form: GreyTermForm,
    /// Grey-model values aligned with the dataset targets; may be empty when
    /// xi = 0 (plain MLP).
    pub grey_targets: Vec<f64>,
}

impl GreyInformedLossConfig {
    pub fn new(xi: f64, grey_term_form: GreyTermForm, grey_targets: Vec<f64>) -> Result<Self> {
        if !(0.0..=1.0).contains(&xi) {
            return Err(Error::Param(format!("xi must lie in [0, 1], got {xi}")));
        }
        Ok(Self {
            xi,
            grey_term_form,
            grey_targets,
        })
    }

    /// Plain-MLP configuration: ξ = 0, no grey targets.
    pub fn plain() -> Self {
        Self {
            xi: 0.0,
            grey_term_form: GreyTermForm::Mae,
            grey_targets: Vec::new(),
        }
    }

    fn check_alignment(&self, n: usize) -> Result<()> {
        if self.xi != 0.0 && self.grey_targets.len() != n {
            return Err(Error::Shape(format!(
                "{} grey targets for {} samples",
                self.grey_targets.len(),
                n
            )));
        }
        Ok(())
    }
}

/// The composite loss: data MSE plus ξ times the grey term.
pub fn composite_loss(preds: &[f64], targets: &[f64], cfg: &GreyInformedLossConfig) -> Result<f64> {
    if preds.len() != targets.len() || preds.is_empty() {
        return Err(Error::Shape(format!(
            "{} predictions vs {} targets",
            preds.len(),
            targets.len()
        )));
    }
    cfg.check_alignment(preds.len())?;
    let n = preds.len() as f64;
    let data: f64 = preds
        .iter()
        .zip(targets)
        .map(|(p, t)| (t - p) * (t - p))
        .sum::<f64>()
        / n;
    if cfg.xi == 0.0 {
        return Ok(data);
    }
    let grey: f64 = preds
        .iter()
        .zip(&cfg.grey_targets)
        .map(|(p, g)| match cfg.grey_term_form {
            GreyTermForm::Mae => (p - g).abs(),
            GreyTermForm::Mse => (p - g) * (p - g),
        })
        .sum::<f64>()
        / n;
    Ok(data + cfg.xi * grey)
}

/// Parameter gradients, mirroring the weight/bias layout of [`MlpState`].
#[derive(Debug, Clone)]
pub struct Gradients {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

/// Full-batch gradient of the composite loss with respect to every parameter.
///
/// The MAE grey term uses the subgradient sign(pred - g), with sign(0) := 0.
pub fn gradient(
    mlp: &MlpState,
    dataset: &WindowDataset,
    cfg: &GreyInformedLossConfig,
) -> Result<Gradients> {
    if dataset.inputs.is_empty() {
        return Err(Error::Shape("empty dataset".into()));
    }
    cfg.check_alignment(dataset.targets.len())?;
    let n = dataset.targets.len() as f64;
    let mut grads = Gradients {
        weights: mlp.weights.iter().map(|w| vec![0.0; w.len()]).collect(),
        biases: mlp.biases.iter().map(|b| vec![0.0; b.len()]).collect(),
    };
    for (i, (input, &target)) in dataset.inputs.iter().zip(&dataset.targets).enumerate() {
        let acts = mlp.forward_cached(input)?;
        let pred = acts.last().unwrap()[0];
        // dL/dpred for this sample.
        let mut dpred = 2.0 * (pred - target) / n;
        if cfg.xi != 0.0 {
            let g = cfg.grey_targets[i];
            dpred += cfg.xi
                * match cfg.grey_term_form {
                    GreyTermForm::Mae => {
                        let d = pred - g;
                        if d > 0.0 {
                            1.0
                        } else if d < 0.0 {
                            -1.0
                        } else {
                            0.0
                        }
                    }
                    GreyTermForm::Mse => 2.0 * (pred - g),
                }
                / n;
        }
        // Backpropagate: delta holds dL/dz for the current layer.
        let mut delta = vec![dpred];
        for l in (0..mlp.num_layers()).rev() {
            let nin = mlp.layer_sizes[l];
            let prev = &acts[l];
            for (o, &d) in delta.iter().enumerate() {
                grads.biases[l][o] += d;
                let row = &mut grads.weights[l][o * nin..(o + 1) * nin];
                for (gw, a) in row.iter_mut().zip(prev) {
                    *gw += d * a;
                }
            }
            if l > 0 {
                let mut next = vec![0.0; nin];
                for (o, &d) in delta.iter().enumerate() {
                    let row = &mlp.weights[l][o * nin..(o + 1) * nin];
                    for (nd, w) in next.iter_mut().zip(row) {
                        *nd += d * w;
                    }
                }
                // Hidden layers carry the activation derivative.
                for (nd, a) in next.iter_mut().zip(&acts[l]) {
                    *nd *= mlp.activation.derivative_from_output(*a);
                }
                delta = next;
            }
        }
    }
    Ok(grads)
}

/// Whether training data is min-max normalized to [0, 1] first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    MinMax,
    None,
}

/// Min-max transform fitted on the training range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalizer {
    pub min: f64,
    pub max: f64,
}

impl Normalizer {
    pub fn fit(values: impl Iterator<Item = f64>) -> Self {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            min = min.min(v);
            max = max.max(v);
        }
        Self { min, max }
    }

    fn span(&self) -> f64 {
        let s = self.max - self.min;
        if s == 0.0 {
            1.0
        } else {
            s
        }
    }

    pub fn normalize(&self, x: f64) -> f64 {
        (x - self.min) / self.span()
    }

    pub fn denormalize(&self, z: f64) -> f64 {
        z * self.span() + self.min
    }
}

/// Gradient-descent training settings.
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub iterations: usize,
    pub normalization: Normalization,
    /// Hidden layer widths; the architecture is [T, hidden..., 1].
    pub hidden: Vec<usize>,
    pub activation: Activation,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.001,
            iterations: 2000,
            normalization: Normalization::MinMax,
            hidden: vec![10],
            activation: Activation::Tanh,
        }
    }
}

/// A trained network plus the normalization it was trained under.
#[derive(Debug, Clone)]
pub struct TrainedMlp {
    pub mlp: MlpState,
    pub norm: Option<Normalizer>,
    pub loss_trace: Vec<f64>,
}

/// Train with gradient descent; see [`train_observed`] for the trace hook.
pub fn train(
    dataset: &WindowDataset,
    loss_cfg: &GreyInformedLossConfig,
    train_cfg: &TrainConfig,
    seed: u64,
) -> Result<TrainedMlp> {
    train_observed(dataset, loss_cfg, train_cfg, seed, &mut |_, _| {})
}

/// Train, invoking `observer(iteration, state)` after every parameter update.
///
/// Runs exactly `iterations` full-batch gradient-descent steps. The loss
/// recorded at iteration i is measured before the i-th update. Deterministic
/// given (seed, dataset, configs).
pub fn train_observed(
    dataset: &WindowDataset,
    loss_cfg: &GreyInformedLossConfig,
    train_cfg: &TrainConfig,
    seed: u64,
    observer: &mut dyn FnMut(usize, &MlpState),
) -> Result<TrainedMlp> {
    if dataset.inputs.is_empty() {
        return Err(Error::Shape("empty dataset".into()));
    }
    if train_cfg.learning_rate <= 0.0 {
        return Err(Error::Param("learning rate must be positive".into()));
    }
    if train_cfg.iterations < 1 {
        return Err(Error::Param("iteration count must be at least 1".into()));
    }
    loss_cfg.check_alignment(dataset.targets.len())?;

    // Normalize inputs, targets, and grey targets with one shared transform
    // fitted on all training values.
    let (work, work_loss, norm) = match train_cfg.normalization {
        Normalization::None => (dataset.clone(), loss_cfg.clone(), None),
        Normalization::MinMax => {
            let norm = Normalizer::fit(
                dataset
                    .inputs
                    .iter()
                    .flatten()
                    .chain(dataset.targets.iter())
                    .copied(),
            );
            let work = WindowDataset {
                inputs: dataset
                    .inputs
                    .iter()
                    .map(|w| w.iter().map(|&x| norm.normalize(x)).collect())
                    .collect(),
                targets: dataset.targets.iter().map(|&t| norm.normalize(t)).collect(),
                window: dataset.window,
                first_target_index: dataset.first_target_index,
            };
            let work_loss = GreyInformedLossConfig {
                xi: loss_cfg.xi,
                grey_term_form: loss_cfg.grey_term_form,
                grey_targets: loss_cfg
                    .grey_targets
                    .iter()
                    .map(|&g| norm.normalize(g))
                    .collect(),
            };
            (work, work_loss, Some(norm))
        }
    };

    let mut sizes = vec![dataset.window];
    sizes.extend_from_slice(&train_cfg.hidden);
    sizes.push(1);
    let mut mlp = MlpState::init(sizes, train_cfg.activation, seed)?;

    let mut trace = Vec::with_capacity(train_cfg.iterations);
    for iter in 0..train_cfg.iterations {
        let preds: Vec<f64> = work
            .inputs
            .iter()
            .map(|w| mlp.forward(w))
            .collect::<Result<_>>()?;
        let loss = composite_loss(&preds, &work.targets, &work_loss)?;
        if !loss.is_finite() {
            return Err(Error::Diverged {
                iter,
                what: format!("loss became {loss}"),
            });
        }
        let grads = gradient(&mlp, &work, &work_loss)?;
        for (w, gw) in mlp.weights.iter_mut().zip(&grads.weights) {
            for (wi, gi) in w.iter_mut().zip(gw) {
                *wi -= train_cfg.learning_rate * gi;
            }
        }
        for (b, gb) in mlp.biases.iter_mut().zip(&grads.biases) {
            for (bi, gi) in b.iter_mut().zip(gb) {
                *bi -= train_cfg.learning_rate * gi;
            }
        }
        if !mlp.all_finite() {
            return Err(Error::Diverged {
                iter,
                what: "parameters became non-finite".into(),
            });
        }
        trace.push(loss);
        observer(iter, &mlp);
    }

    Ok(TrainedMlp {
        mlp,
        norm,
        loss_trace: trace,
    })
}

impl TrainedMlp {
    /// One-step prediction on raw-scale inputs.
    pub fn predict_window(&self, window: &[f64]) -> Result<f64> {
        match &self.norm {
            None => self.mlp.forward(window),
            Some(norm) => {
                let z: Vec<f64> = window.iter().map(|&x| norm.normalize(x)).collect();
                Ok(norm.denormalize(self.mlp.forward(&z)?))
            }
        }
    }

    /// One-step fitted values over every window of a dataset (raw scale).
    pub fn fitted(&self, dataset: &WindowDataset) -> Result<Vec<f64>> {
        dataset
            .inputs
            .iter()
            .map(|w| self.predict_window(w))
            .collect()
    }
}

/// Iterative multi-step forecasting: predict one step, append the prediction
/// to the working window, repeat `horizon` times.
pub fn forecast(
    model: &TrainedMlp,
    history: &TimeSeries,
    window: usize,
    horizon: usize,
) -> Result<TimeSeries> {
    if horizon < 1 {
        return Err(Error::Param("forecast horizon must be at least 1".into()));
    }
    if window != model.mlp.input_size() {
        return Err(Error::Shape(format!(
            "window {} does not match network input size {}",
            window,
            model.mlp.input_size()
        )));
    }
    if history.len() < window {
        return Err(Error::TooShort {
            need: window,
            got: history.len(),
        });
    }
    let mut buf = history.values()[history.len() - window..].to_vec();
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let p = model.predict_window(&buf)?;
        if !p.is_finite() {
            return Err(Error::Domain("forecast produced a non-finite value".into()));
        }
        out.push(p);
        buf.remove(0);
        buf.push(p);
    }
    TimeSeries::new(out)
}

/// Grey-model values aligned with dataset targets: restored fitted values on
/// the training range, extrapolated restored forecasts beyond it.
///
/// `first_index` is the 1-based series index of the first requested value
/// (for training targets this is `dataset.first_target_index`).
pub fn make_grey_targets(fit: &GreyModelFit, first_index: usize, count: usize) -> Result<Vec<f64>> {
    if first_index < 1 {
        return Err(Error::Range {
            index: first_index,
            lo: 1,
            hi: fit.n,
        });
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    let last = first_index + count - 1;
    let beyond = last.saturating_sub(fit.n);
    let forecasts = if beyond > 0 {
        fit.predict(beyond)?.into_values()
    } else {
        Vec::new()
    };
    Ok((first_index..=last)
        .map(|k| {
            if k <= fit.n {
                fit.restored_fit.at(k)
            } else {
                forecasts[k - fit.n - 1]
            }
        })
        .collect())
}
