//! The alternating minimax training loop.

use std::io::Write;
use std::ops::Range;

use crate::matrix::Matrix;
use crate::nn::{adam_step, bce_with_logits, Activation, AdamConfig, Mlp, OptState};
use crate::rng::{split_seed, GaussianStream};
use crate::scalar::{real, to_f64, Real};
use crate::tabular::{one_hot_encode, CategoricalTable};

use super::output::{logits_grad, probs_from_logits};
use super::{GanConfig, GanError, GanModel, OutputMode};

/// One record per completed epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub d_loss: f64,
    pub g_loss: f64,
    pub d_accuracy: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingLog {
    pub epochs: Vec<EpochRecord>,
}

impl TrainingLog {
    /// CSV with columns `epoch,d_loss,g_loss,d_accuracy`.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "epoch,d_loss,g_loss,d_accuracy")?;
        for r in &self.epochs {
            writeln!(out, "{},{},{},{}", r.epoch, r.d_loss, r.g_loss, r.d_accuracy)?;
        }
        Ok(())
    }
}

fn gaussian_matrix<T: Real>(rows: usize, cols: usize, stream: &mut GaussianStream) -> Matrix<T> {
    Matrix::from_fn(rows, cols, |_, _| real(stream.next()))
}

/// Discriminator update on one mini-batch: binary cross-entropy on
/// real rows (target 1) plus generated rows (target 0). The generator
/// is read-only here, so a discriminator step cannot touch generator
/// parameters.
fn discriminator_step<T: Real>(
    discriminator: &mut Mlp<T>,
    state: &mut OptState<T>,
    generator: &Mlp<T>,
    mode: OutputMode,
    blocks: &[Range<usize>],
    real_batch: &Matrix<T>,
    noise: &Matrix<T>,
) -> Result<T, GanError> {
    let (fake_logits, _) = generator.forward(noise)?;
    let fake_probs = probs_from_logits(&fake_logits, mode, blocks);

    let ones = Matrix::from_fn(real_batch.rows(), 1, |_, _| T::one());
    let zeros = Matrix::zeros(fake_probs.rows(), 1);

    let (real_out, real_cache) = discriminator.forward(real_batch)?;
    let (loss_real, grad_real) = bce_with_logits(&real_out, &ones)?;
    let (mut grads, _) = discriminator.backprop(&real_cache, &grad_real)?;

    let (fake_out, fake_cache) = discriminator.forward(&fake_probs)?;
    let (loss_fake, grad_fake) = bce_with_logits(&fake_out, &zeros)?;
    let (fake_grads, _) = discriminator.backprop(&fake_cache, &grad_fake)?;

    grads.add_assign(&fake_grads);
    adam_step(discriminator, &grads, state)?;
    Ok(loss_real + loss_fake)
}

/// Generator update on one mini-batch: the non-saturating loss, i.e.
/// cross-entropy of the discriminator's logits on generated rows
/// against target 1, with gradients flowing through the generator
/// only (the discriminator is read-only here).
fn generator_step<T: Real>(
    generator: &mut Mlp<T>,
    state: &mut OptState<T>,
    discriminator: &Mlp<T>,
    mode: OutputMode,
    blocks: &[Range<usize>],
    noise: &Matrix<T>,
) -> Result<T, GanError> {
    let (logits, gen_cache) = generator.forward(noise)?;
    let probs = probs_from_logits(&logits, mode, blocks);
    let ones = Matrix::from_fn(probs.rows(), 1, |_, _| T::one());

    let (disc_out, disc_cache) = discriminator.forward(&probs)?;
    let (loss, disc_grad) = bce_with_logits(&disc_out, &ones)?;
    // discriminator gradients are discarded; only the input gradient chains
    let (_, prob_grad) = discriminator.backprop(&disc_cache, &disc_grad)?;
    let logit_grad = logits_grad(&prob_grad, &probs, mode, blocks);
    let (gen_grads, _) = generator.backprop(&gen_cache, &logit_grad)?;
    adam_step(generator, &gen_grads, state)?;
    Ok(loss)
}

/// Fraction of a held real batch and a held generated batch the
/// discriminator classifies correctly (logit > 0 means "real").
fn held_accuracy<T: Real>(
    discriminator: &Mlp<T>,
    generator: &Mlp<T>,
    mode: OutputMode,
    blocks: &[Range<usize>],
    held_real: &Matrix<T>,
    held_noise: &Matrix<T>,
) -> Result<f64, GanError> {
    let (fake_logits, _) = generator.forward(held_noise)?;
    let fake_probs = probs_from_logits(&fake_logits, mode, blocks);
    let (real_scores, _) = discriminator.forward(held_real)?;
    let (fake_scores, _) = discriminator.forward(&fake_probs)?;
    let correct_real = real_scores.data().iter().filter(|&&z| z > T::zero()).count();
    let correct_fake = fake_scores.data().iter().filter(|&&z| z <= T::zero()).count();
    let total = real_scores.rows() + fake_scores.rows();
    Ok((correct_real + correct_fake) as f64 / total as f64)
}

/// Train a generator/discriminator pair on a categorical table.
///
/// Everything is reproducible from `config.seed` through four derived
/// streams: generator init (0), discriminator init (1), epoch shuffles
/// (2), training noise (3), held evaluation noise (4). Each epoch
/// visits the shuffled rows in full batches (a trailing partial batch
/// is skipped; reshuffling covers all rows across epochs), and every
/// batch runs one discriminator step then one generator step on fresh
/// noise.
pub fn train_gan<T: Real>(
    table: &CategoricalTable,
    config: &GanConfig,
) -> Result<(GanModel<T>, TrainingLog), GanError> {
    config.validate(table.n_rows())?;
    let schema = table.schema();
    let encoded = one_hot_encode::<T>(table);
    let width = encoded.width();
    let blocks = encoded.blocks_for(schema)?;
    let data = encoded.values();

    let mut gen_sizes = vec![config.latent_dim];
    gen_sizes.extend(&config.generator_hidden);
    gen_sizes.push(width);
    let mut gen_acts = vec![Activation::Relu; config.generator_hidden.len()];
    gen_acts.push(Activation::Identity);
    let mut generator: Mlp<T> =
        Mlp::new(&gen_sizes, &gen_acts, split_seed(config.seed, 0))?;

    let mut disc_sizes = vec![width];
    disc_sizes.extend(&config.discriminator_hidden);
    disc_sizes.push(1);
    let mut disc_acts = vec![Activation::Relu; config.discriminator_hidden.len()];
    disc_acts.push(Activation::Identity);
    let mut discriminator: Mlp<T> =
        Mlp::new(&disc_sizes, &disc_acts, split_seed(config.seed, 1))?;

    let mut gen_state = OptState::new(
        &generator,
        AdamConfig::with_learning_rate(config.generator_lr),
    );
    let mut disc_state = OptState::new(
        &discriminator,
        AdamConfig::with_learning_rate(config.discriminator_lr),
    );

    let mut shuffle_rng = crate::rng::stream(split_seed(config.seed, 2));
    let mut noise = GaussianStream::new(split_seed(config.seed, 3));
    let mut held_noise_stream = GaussianStream::new(split_seed(config.seed, 4));

    let held = config.batch_size.min(table.n_rows());
    let held_real = data.slice_rows(0, held);
    let held_noise = gaussian_matrix::<T>(held, config.latent_dim, &mut held_noise_stream);

    let mode = config.output_mode;
    let mut log = TrainingLog::default();
    for epoch in 0..config.epochs {
        let perm = crate::rng::permutation(table.n_rows(), &mut shuffle_rng);
        let mut d_loss_sum = 0.0;
        let mut g_loss_sum = 0.0;
        let mut batches = 0usize;
        for (batch_index, batch) in perm.chunks_exact(config.batch_size).enumerate() {
            let real_batch = data.select_rows(batch);
            let disc_noise =
                gaussian_matrix::<T>(config.batch_size, config.latent_dim, &mut noise);
            let d_loss = discriminator_step(
                &mut discriminator,
                &mut disc_state,
                &generator,
                mode,
                &blocks,
                &real_batch,
                &disc_noise,
            )?;
            let gen_noise =
                gaussian_matrix::<T>(config.batch_size, config.latent_dim, &mut noise);
            let g_loss = generator_step(
                &mut generator,
                &mut gen_state,
                &discriminator,
                mode,
                &blocks,
                &gen_noise,
            )?;
            if !d_loss.is_finite() || !g_loss.is_finite() {
                return Err(GanError::NonFiniteLoss { epoch, batch: batch_index });
            }
            d_loss_sum += to_f64(d_loss);
            g_loss_sum += to_f64(g_loss);
            batches += 1;
        }
        let d_accuracy = held_accuracy(
            &discriminator,
            &generator,
            mode,
            &blocks,
            &held_real,
            &held_noise,
        )?;
        log.epochs.push(EpochRecord {
            epoch,
            d_loss: d_loss_sum / batches.max(1) as f64,
            g_loss: g_loss_sum / batches.max(1) as f64,
            d_accuracy,
        });
    }

    let column_map = encoded.column_map().to_vec();
    Ok((
        GanModel::new(generator, discriminator, config.clone(), schema.clone(), column_map),
        log,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tabular::{Schema, Variable};

    fn constant_table(n: usize) -> CategoricalTable {
        let schema = Schema::new(
            vec![Variable::new("x", &["C1", "C2"]), Variable::new("y", &["C1", "C2"])],
            1,
        )
        .unwrap();
        CategoricalTable::new(schema, vec![vec![0, 1]; n]).unwrap()
    }

    fn small_config(epochs: usize) -> GanConfig {
        GanConfig {
            latent_dim: 4,
            generator_hidden: vec![16],
            discriminator_hidden: vec![16],
            batch_size: 32,
            epochs,
            seed: 7,
            ..GanConfig::default()
        }
    }

    #[test]
    fn zero_epochs_returns_the_initialization() {
        let table = constant_table(64);
        let cfg = small_config(0);
        let (model, log) = train_gan::<f64>(&table, &cfg).unwrap();
        assert!(log.epochs.is_empty());
        // identical to a fresh init from the same seed
        let (model2, _) = train_gan::<f64>(&table, &cfg).unwrap();
        assert_eq!(model, model2);
    }

    #[test]
    fn untrained_discriminator_loss_is_near_two_ln_two() {
        let table = constant_table(64);
        let (model, _) = train_gan::<f64>(&table, &small_config(0)).unwrap();
        // replay one balanced batch against the untrained pair
        let encoded = one_hot_encode::<f64>(&table);
        let blocks = encoded.blocks_for(table.schema()).unwrap();
        let real = encoded.values().slice_rows(0, 32);
        let mut noise = GaussianStream::new(1);
        let z = gaussian_matrix::<f64>(32, 4, &mut noise);
        let (fake_logits, _) = model.generator.forward(&z).unwrap();
        let fake = probs_from_logits(&fake_logits, model.config.output_mode, &blocks);
        let ones = Matrix::from_fn(32, 1, |_, _| 1.0);
        let zeros = Matrix::zeros(32, 1);
        let (lr, _) =
            bce_with_logits(&model.discriminator.forward(&real).unwrap().0, &ones).unwrap();
        let (lf, _) =
            bce_with_logits(&model.discriminator.forward(&fake).unwrap().0, &zeros).unwrap();
        let total = lr + lf;
        let two_ln_two = 2.0 * std::f64::consts::LN_2;
        assert!((total - two_ln_two).abs() < 0.4, "loss {total}");
    }

    #[test]
    fn training_is_deterministic_given_the_seed() {
        let table = constant_table(96);
        let cfg = small_config(3);
        let (m1, l1) = train_gan::<f64>(&table, &cfg).unwrap();
        let (m2, l2) = train_gan::<f64>(&table, &cfg).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(l1, l2);
        let other = GanConfig { seed: 8, ..cfg };
        let (m3, _) = train_gan::<f64>(&table, &other).unwrap();
        assert_ne!(m1, m3);
    }

    #[test]
    fn steps_do_not_cross_parameter_boundaries() {
        let table = constant_table(64);
        let (mut model, _) = train_gan::<f64>(&table, &small_config(0)).unwrap();
        let encoded = one_hot_encode::<f64>(&table);
        let blocks = encoded.blocks_for(table.schema()).unwrap();
        let real = encoded.values().slice_rows(0, 32);
        let mut noise = GaussianStream::new(2);
        let z = gaussian_matrix::<f64>(32, 4, &mut noise);

        let gen_before = model.generator.clone();
        let mut d_state = OptState::new(&model.discriminator, AdamConfig::default());
        discriminator_step(
            &mut model.discriminator,
            &mut d_state,
            &model.generator,
            model.config.output_mode,
            &blocks,
            &real,
            &z,
        )
        .unwrap();
        assert_eq!(model.generator, gen_before, "discriminator step moved the generator");

        let disc_before = model.discriminator.clone();
        let mut g_state = OptState::new(&model.generator, AdamConfig::default());
        generator_step(
            &mut model.generator,
            &mut g_state,
            &model.discriminator,
            model.config.output_mode,
            &blocks,
            &z,
        )
        .unwrap();
        assert_eq!(model.discriminator, disc_before, "generator step moved the discriminator");
        assert_ne!(model.generator, gen_before, "generator step had no effect");
    }

    #[test]
    fn log_losses_stay_finite() {
        let table = constant_table(96);
        let (_, log) = train_gan::<f64>(&table, &small_config(5)).unwrap();
        assert_eq!(log.epochs.len(), 5);
        for r in &log.epochs {
            assert!(r.d_loss.is_finite() && r.g_loss.is_finite());
            assert!((0.0..=1.0).contains(&r.d_accuracy));
        }
    }

    #[test]
    fn training_log_csv_has_the_documented_header() {
        let mut log = TrainingLog::default();
        log.epochs.push(EpochRecord { epoch: 0, d_loss: 1.25, g_loss: 0.5, d_accuracy: 0.75 });
        let mut buf = Vec::new();
        log.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "epoch,d_loss,g_loss,d_accuracy\n0,1.25,0.5,0.75\n");
    }
}
