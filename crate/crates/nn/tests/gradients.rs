use epochlab_nn::{
    deeponet_batch_loss, deeponet_batch_loss_grad, dense_batch_loss, dense_batch_loss_grad,
    forward_dense, init_deeponet_params, init_dense_params, Activation, DeepONetSpec,
    DenseNetworkSpec,
};

const FD_STEP: f64 = 1e-5;
const FD_REL_TOL: f64 = 1e-4;
const FD_ABS_GUARD: f64 = 1e-8;

fn assert_gradient_matches_fd(
    loss_at: impl Fn(&[f64]) -> f64,
    params: &[f64],
    analytic: &[f64],
    context: &str,
) {
    let mut theta = params.to_vec();
    for i in 0..theta.len() {
        let saved = theta[i];
        theta[i] = saved + FD_STEP;
        let plus = loss_at(&theta);
        theta[i] = saved - FD_STEP;
        let minus = loss_at(&theta);
        theta[i] = saved;
        let fd = (plus - minus) / (2.0 * FD_STEP);
        let an = analytic[i];
        let diff = (fd - an).abs();
        let rel = diff / fd.abs().max(an.abs()).max(FD_ABS_GUARD);
        assert!(
            diff < FD_ABS_GUARD || rel < FD_REL_TOL,
            "{context}: param {i}: fd={fd} analytic={an} rel={rel}"
        );
    }
}

fn pseudo_batch(rows: usize, width: usize, salt: u64) -> Vec<Vec<f64>> {
    // Deterministic quasi-random values in [-1, 1].
    (0..rows)
        .map(|r| {
            (0..width)
                .map(|c| {
                    let k = (r * width + c) as u64 + salt * 7919;
                    let angle = (k.wrapping_mul(2654435761) % 10_000) as f64 / 10_000.0;
                    (angle * std::f64::consts::TAU).sin()
                })
                .collect()
        })
        .collect()
}

fn check_dense(widths: &[usize], activation: Activation, seed: u64, batch: usize) {
    let spec = DenseNetworkSpec::new(widths.to_vec(), activation, seed).unwrap();
    let params = init_dense_params(&spec).unwrap();
    let inputs = pseudo_batch(batch, spec.input_width(), seed);
    let targets = pseudo_batch(batch, spec.output_width(), seed + 1);
    let (_, grads) = dense_batch_loss_grad(&spec, &params, &inputs, &targets).unwrap();
    assert_gradient_matches_fd(
        |theta| dense_batch_loss(&spec, theta, &inputs, &targets).unwrap(),
        &params,
        &grads,
        &format!("dense {widths:?} {activation:?}"),
    );
}

#[test]
fn dense_gradients_match_finite_differences() {
    check_dense(&[3, 4, 2], Activation::Gelu, 89, 3);
    check_dense(&[2, 5, 5, 1], Activation::Relu, 231, 2);
    check_dense(&[4, 3], Activation::None, 928, 4);
    check_dense(&[1, 6, 1], Activation::Gelu, 814, 5);
}

#[test]
fn deeponet_gradients_match_finite_differences() {
    for (seed, branch_widths, trunk_widths, p, activation) in [
        (269u64, vec![5, 8, 3], vec![1, 8, 3], 3, Activation::Gelu),
        (89, vec![3, 2, 1], vec![1, 2, 1], 1, Activation::Relu),
    ] {
        let spec = DeepONetSpec::new(
            DenseNetworkSpec::new(branch_widths, activation, seed).unwrap(),
            DenseNetworkSpec::new(trunk_widths, activation, seed + 1).unwrap(),
            p,
        )
        .unwrap();
        let params = init_deeponet_params(&spec).unwrap();
        let u_batch = pseudo_batch(4, spec.branch.input_width(), seed + 2);
        // Grid offset from zero: with zero-initialized biases a grid point
        // at y = 0 parks a ReLU pre-activation exactly on its kink, where a
        // finite difference measures a one-sided derivative.
        let grid: Vec<f64> = (0..6).map(|j| (j as f64 + 0.5) / 6.0).collect();
        let g_batch = pseudo_batch(4, grid.len(), seed + 3);
        let (_, grads) =
            deeponet_batch_loss_grad(&spec, &params, &u_batch, &grid, &g_batch).unwrap();
        assert_gradient_matches_fd(
            |theta| deeponet_batch_loss(&spec, theta, &u_batch, &grid, &g_batch).unwrap(),
            &params,
            &grads,
            &format!("deeponet p={p} {activation:?}"),
        );
    }
}

#[test]
fn gradient_is_exactly_zero_at_a_perfect_fit() {
    let spec = DenseNetworkSpec::new(vec![2, 3, 2], Activation::Gelu, 89).unwrap();
    let params = init_dense_params(&spec).unwrap();
    let inputs = pseudo_batch(3, 2, 5);
    let targets: Vec<Vec<f64>> = inputs
        .iter()
        .map(|x| forward_dense(&spec, &params, x).unwrap())
        .collect();
    let (loss, grads) = dense_batch_loss_grad(&spec, &params, &inputs, &targets).unwrap();
    assert_eq!(loss, 0.0);
    assert!(grads.iter().all(|&g| g == 0.0));
}

#[test]
fn batch_gradient_is_the_mean_of_per_sample_gradients() {
    let spec = DenseNetworkSpec::new(vec![3, 4, 2], Activation::Gelu, 269).unwrap();
    let params = init_dense_params(&spec).unwrap();
    let inputs = pseudo_batch(2, 3, 11);
    let targets = pseudo_batch(2, 2, 12);

    let (loss_both, grads_both) =
        dense_batch_loss_grad(&spec, &params, &inputs, &targets).unwrap();
    let (l1, g1) = dense_batch_loss_grad(
        &spec,
        &params,
        &inputs[..1].to_vec(),
        &targets[..1].to_vec(),
    )
    .unwrap();
    let (l2, g2) = dense_batch_loss_grad(
        &spec,
        &params,
        &inputs[1..].to_vec(),
        &targets[1..].to_vec(),
    )
    .unwrap();

    assert!((loss_both - 0.5 * (l1 + l2)).abs() < 1e-14);
    for i in 0..grads_both.len() {
        let mean = 0.5 * (g1[i] + g2[i]);
        assert!(
            (grads_both[i] - mean).abs() < 1e-12 * mean.abs().max(1.0),
            "param {i}: batch {} vs mean {mean}",
            grads_both[i]
        );
    }
}
