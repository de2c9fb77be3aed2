use leibniz_core::signs::{
    epsilon_insertion, koszul_sign, ordered_partitions, respectful_partitions, two_block_partitions, BlockPartition,
    SignContext,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn stirling(n: usize, k: usize) -> u64 {
    let mut s = vec![vec![0u64; n + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for j in 1..=i {
            s[i][j] = j as u64 * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    s[n][k]
}

fn bell(n: usize) -> u64 {
    // Bell triangle
    let mut row = vec![1u64];
    for _ in 1..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            next.push(next.last().unwrap() + v);
        }
        row = next;
    }
    *row.last().unwrap()
}

/// Inversions of odd letters in the flattened order, counted directly.
fn sign_by_inversions(degrees: &[i64], order: &[usize]) -> i32 {
    let mut count = 0;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b] && degrees[order[a]] % 2 != 0 && degrees[order[b]] % 2 != 0 {
                count += 1;
            }
        }
    }
    if count % 2 == 0 {
        1
    } else {
        -1
    }
}

#[test]
fn respectful_counts_are_stirling_and_bell() {
    for n in 1..=8 {
        let mut total = 0;
        for j in 1..=n {
            let parts = respectful_partitions(n, j);
            assert_eq!(parts.len() as u64, stirling(n, j), "S({n},{j})");
            assert!(parts.iter().all(|p| p.is_respectful() && p.len() == j));
            total += parts.len() as u64;
        }
        assert_eq!(total, bell(n), "B({n})");
        assert!(respectful_partitions(n, n + 1).is_empty());
    }
}

#[test]
fn respectful_is_the_filter_of_all_ordered_partitions() {
    for n in 1..=6 {
        for j in 1..=n {
            let filtered: Vec<_> = ordered_partitions(n, j).into_iter().filter(|p| p.is_respectful()).collect();
            assert_eq!(respectful_partitions(n, j), filtered);
        }
    }
    let three: Vec<Vec<Vec<usize>>> = respectful_partitions(3, 2).iter().map(|p| p.blocks().to_vec()).collect();
    assert_eq!(three, vec![vec![vec![0], vec![1, 2]], vec![vec![0, 1], vec![2]], vec![vec![1], vec![0, 2]]]);
    assert_eq!(respectful_partitions(4, 1).len(), 1);
    assert_eq!(respectful_partitions(4, 2).len(), 7);
}

#[test]
fn two_block_counts() {
    assert!(two_block_partitions(0).is_err());
    assert!(two_block_partitions(1).unwrap().is_empty());
    for n in 2..=8 {
        let parts = two_block_partitions(n).unwrap();
        assert_eq!(parts.len(), (1 << n) - 2);
        // brute force over bitmasks
        let mut expect: Vec<(Vec<usize>, Vec<usize>)> = (1..(1u32 << n) - 1)
            .map(|m| {
                let i = (0..n).filter(|k| m >> k & 1 == 1).collect();
                let j = (0..n).filter(|k| m >> k & 1 == 0).collect();
                (i, j)
            })
            .collect();
        expect.sort();
        let got: Vec<_> = parts.iter().map(|p| (p.blocks()[0].clone(), p.blocks()[1].clone())).collect();
        assert_eq!(got, expect);
    }
}

#[test]
fn koszul_matches_inversion_count() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=6 {
        for _ in 0..5 {
            let degrees: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=3)).collect();
            let ctx = SignContext::new(degrees.clone());
            for j in 1..=n {
                for p in ordered_partitions(n, j) {
                    assert_eq!(koszul_sign(&ctx, &p).unwrap(), sign_by_inversions(&degrees, &p.flattened()));
                }
            }
        }
    }
    let odd = SignContext::new(vec![1, 1]);
    let swap = BlockPartition::new(2, vec![vec![1], vec![0]]).unwrap();
    assert_eq!(koszul_sign(&odd, &swap).unwrap(), -1);
    let mixed = SignContext::new(vec![1, 3, 2]);
    let p = BlockPartition::new(3, vec![vec![1], vec![0, 2]]).unwrap();
    assert_eq!(koszul_sign(&mixed, &p).unwrap(), -1);
    assert!(koszul_sign(&mixed, &swap).is_err());
}

#[test]
fn koszul_is_multiplicative_under_refinement() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=5 {
        for _ in 0..4 {
            let degrees: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
            let ctx = SignContext::new(degrees.clone());
            for j in 1..=n {
                for p in ordered_partitions(n, j) {
                    let outer = koszul_sign(&ctx, &p).unwrap();
                    // split every block of size >= 2 by each of its ordered 2-block partitions
                    for (bi, block) in p.blocks().iter().enumerate() {
                        if block.len() < 2 {
                            continue;
                        }
                        let inner_ctx = SignContext::new(block.iter().map(|&i| degrees[i]).collect());
                        for q in ordered_partitions(block.len(), 2) {
                            let inner = koszul_sign(&inner_ctx, &q).unwrap();
                            let mut blocks: Vec<Vec<usize>> = Vec::new();
                            for (bk, b) in p.blocks().iter().enumerate() {
                                if bk == bi {
                                    for sub in q.blocks() {
                                        blocks.push(sub.iter().map(|&s| block[s]).collect());
                                    }
                                } else {
                                    blocks.push(b.clone());
                                }
                            }
                            let refined = BlockPartition::new(n, blocks).unwrap();
                            assert_eq!(koszul_sign(&ctx, &refined).unwrap(), outer * inner);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn even_contexts_give_plus_one() {
    let ctx = SignContext::new(vec![0, 2, -2, 4]);
    for j in 1..=4 {
        for p in ordered_partitions(4, j) {
            assert_eq!(koszul_sign(&ctx, &p).unwrap(), 1);
        }
    }
    for mask in 1u32..16 {
        let pos: Vec<usize> = (0..4).filter(|k| mask >> k & 1 == 1).collect();
        assert_eq!(epsilon_insertion(&ctx, &pos, 0).unwrap(), 1);
        assert_eq!(epsilon_insertion(&ctx, &pos, 1).unwrap(), 1);
    }
}

/// The symbol of degree `q` travels to the last extracted slot; the
/// extracted letters gather right behind it.
fn epsilon_oracle(degrees: &[i64], positions: &[usize], q: i64) -> i32 {
    let last = *positions.last().unwrap();
    let mut aug = vec![q];
    aug.extend_from_slice(degrees);
    let mut order: Vec<usize> = (0..last).filter(|i| !positions.contains(i)).map(|i| i + 1).collect();
    order.push(0);
    order.extend(positions.iter().map(|i| i + 1));
    order.extend((last + 1..degrees.len()).map(|i| i + 1));
    sign_by_inversions(&aug, &order)
}

#[test]
fn insertion_signs() {
    // extraction at the front crosses nothing
    assert_eq!(epsilon_insertion(&SignContext::new(vec![1, 1]), &[0], 1).unwrap(), 1);
    // a single extraction at slot 2 over letters of degree |x| - 1
    for d1 in -2..=3i64 {
        let ctx = SignContext::new(vec![d1 - 1, 0]);
        let expect = if (d1 - 1).rem_euclid(2) == 1 { -1 } else { 1 };
        assert_eq!(epsilon_insertion(&ctx, &[1], 1).unwrap(), expect);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 2..=5 {
        let degrees: Vec<i64> = (0..n).map(|_| rng.gen_range(-1..=2)).collect();
        let ctx = SignContext::new(degrees.clone());
        for a in 0..n {
            for b in a + 1..n {
                for q in [0, 1] {
                    assert_eq!(epsilon_insertion(&ctx, &[a, b], q).unwrap(), epsilon_oracle(&degrees, &[a, b], q));
                }
            }
        }
    }
    assert!(epsilon_insertion(&SignContext::new(vec![0]), &[], 1).is_err());
    assert!(epsilon_insertion(&SignContext::new(vec![0]), &[1], 1).is_err());
}
