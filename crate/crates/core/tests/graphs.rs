mod common;

use horoboundary::graphs::{
    build_grove, graph_boundary, sphere_bound_check, Block, BlockFamily, BlockSizes, Graph, GraphSpace, GroveSpec,
};
use horoboundary::horo::{annulus_boundary_approx, enumerate_busemann_points, AnnulusParams, RayParams};
use horoboundary::PointedSpace;

/// d(v,u) = d(v,m) + (m - n) + d(n,u) for u in block n, v in block m > n.
#[test]
fn grove_distance_identity_exhaustive() {
    let mut checked = 0usize;
    for n_blocks in 2..=8 {
        for family in [BlockFamily::Complete, BlockFamily::Path, BlockFamily::Cycle] {
            for size in 1..=6 {
                if family == BlockFamily::Cycle && size < 3 {
                    continue;
                }
                for attach in [0, size - 1] {
                    let mut spec = GroveSpec::uniform(family, &BlockSizes::Uniform(size), n_blocks).unwrap();
                    spec.attach = vec![attach; n_blocks];
                    let grove = build_grove(&spec).unwrap();
                    let g = &grove.graph;
                    let all: Vec<Vec<u32>> = (0..g.vertex_count()).map(|v| g.bfs(v)).collect();
                    for &(n, _, un) in &grove.block_starts {
                        for &(m, _, vm) in &grove.block_starts {
                            if m <= n {
                                continue;
                            }
                            for u in un..un + size {
                                for v in vm..vm + size {
                                    let spine_m = grove.spine[m];
                                    let spine_n = grove.spine[n];
                                    let expected = all[v][spine_m] + (m - n) as u32 + all[spine_n][u];
                                    assert_eq!(all[v][u], expected, "N={n_blocks} {family} size {size}");
                                    checked += 1;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 10_000);
}

#[test]
fn grove_blocks_of_varying_size() {
    for sizes in [BlockSizes::Linear, BlockSizes::Pow2, BlockSizes::Explicit(vec![3, 1, 4, 1, 5, 2, 6, 5])] {
        let spec = GroveSpec::uniform(BlockFamily::Complete, &sizes, 8).unwrap();
        let grove = build_grove(&spec).unwrap();
        let d = grove.graph.bfs(0);
        for (n, _, start) in &grove.block_starts {
            // attachment vertex sits one step off the spine
            assert_eq!(d[*start], *n as u32 + 1);
        }
    }
}

#[test]
fn explicit_block_edges() {
    let star = Block { vertices: 4, edges: vec![(0, 1), (0, 2), (0, 3)] };
    let spec = GroveSpec { blocks: vec![Some(star); 5], attach: vec![1; 5], two_sided: false };
    let g = build_grove(&spec).unwrap().graph;
    assert_eq!(g.vertex_count(), 5 + 20);
    assert_eq!(star_diameter(), 2);

    fn star_diameter() -> u32 {
        Block { vertices: 4, edges: vec![(0, 1), (0, 2), (0, 3)] }.diameter().unwrap()
    }
}

#[test]
fn grove_k4_single_horofunction() {
    let spec = GroveSpec::uniform(BlockFamily::Complete, &BlockSizes::Uniform(4), 24).unwrap();
    let g = build_grove(&spec).unwrap().graph;
    let b = graph_boundary(&g, 3, None, 2).unwrap();
    assert_eq!(b.len(), 1);
    // the spine ray's limit: d(m, y) - m
    let space = GraphSpace::new(&g, None).unwrap();
    let far = g.bfs(23);
    for p in 0..space.ball_len(3) {
        assert_eq!(b.functions[0].function.values()[p], far[space.vertex(p)] as i64 - 23);
    }
}

#[test]
fn grove_growth_does_not_change_the_boundary() {
    for (sizes, n) in [(BlockSizes::Linear, 14), (BlockSizes::Pow2, 10)] {
        let spec = GroveSpec::uniform(BlockFamily::Complete, &sizes, n).unwrap();
        let g = build_grove(&spec).unwrap().graph;
        assert_eq!(graph_boundary(&g, 2, None, 2).unwrap().len(), 1, "{sizes:?}");
    }
}

#[test]
fn cayley_graph_as_plain_graph_agrees() {
    for (family, extra, r, horizon) in [
        ("Z", vec![], 3, 12),
        ("Z", vec!["aa"], 3, 13),
        ("Dinf", vec![], 3, 12),
        ("Z^2", vec![], 2, 10),
        ("F2", vec![], 2, 8),
        ("Heis", vec![], 2, 7),
        ("Z x C3", vec![], 2, 10),
    ] {
        let ball = common::ball(family, &extra, horizon);
        let graph = Graph::from_space(&ball).unwrap();
        let space = GraphSpace::new(&graph, Some(horizon)).unwrap();
        assert_eq!(space.sphere_sizes(), ball.sphere_sizes());
        let via_graph = graph_boundary(&graph, r, Some(horizon), 2).unwrap();
        let direct = annulus_boundary_approx(&ball, AnnulusParams::new(r)).unwrap();
        assert_eq!(via_graph, direct, "{family}");
    }
}

#[test]
fn two_sided_and_comb() {
    let line = build_grove(&GroveSpec::bare(14, true)).unwrap().graph;
    assert_eq!(graph_boundary(&line, 2, None, 2).unwrap().len(), 2);
    let comb = build_grove(&GroveSpec::uniform(BlockFamily::Complete, &BlockSizes::Uniform(1), 16).unwrap()).unwrap();
    assert_eq!(graph_boundary(&comb.graph, 2, None, 2).unwrap().len(), 1);
}

#[test]
fn sphere_bound_on_groves_and_groups() {
    let spec = GroveSpec::uniform(BlockFamily::Complete, &BlockSizes::Uniform(4), 24).unwrap();
    let g = build_grove(&spec).unwrap().graph;
    let space = GraphSpace::new(&g, None).unwrap();
    let rays = enumerate_busemann_points(&space, RayParams::for_space(&space, 3)).unwrap();
    assert_eq!(rays.certified_count(), 1);
    assert!(sphere_bound_check(&space, rays.certified_count(), 3).holds);

    for (family, count, sphere) in [("Z", 2, 2), ("Dinf", 2, 2)] {
        let ball = common::ball(family, &[], 16);
        let rays = enumerate_busemann_points(&ball, RayParams::for_space(&ball, 4)).unwrap();
        let report = sphere_bound_check(&ball, rays.certified_count(), 3);
        assert_eq!((report.busemann_count, report.min_sphere), (count, sphere));
        assert!(report.holds && report.linear_growth);
    }
}

#[test]
fn edge_list_file_round_trip() {
    let spec = GroveSpec::uniform(BlockFamily::Cycle, &BlockSizes::Uniform(5), 10).unwrap();
    let g = build_grove(&spec).unwrap().graph;
    let text = g.to_edge_list();
    let back = Graph::parse_edge_list(&text, 1000).unwrap();
    assert_eq!(back, g);
    assert_eq!(graph_boundary(&back, 2, None, 2).unwrap(), graph_boundary(&g, 2, None, 2).unwrap());
}
