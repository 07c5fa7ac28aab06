use diskgeo::central::{central_tree, sharpen, tree_decomposition_check};
use diskgeo::hull::{hull_boundary, hull_perimeter};
use diskgeo::{Configuration, Disk, Plane};

fn main() {
    for plane in [
        Plane::hyperbolic(0.7).unwrap(),
        Plane::euclidean(),
        Plane::spherical(0.9).unwrap(),
    ] {
        let disks = vec![
            Disk::new(&plane, plane.point_from_xy(0.0, 0.0), 0.30).unwrap(),
            Disk::new(&plane, plane.point_from_xy(0.9, 0.1), 0.22).unwrap(),
            Disk::new(&plane, plane.point_from_xy(0.4, 0.7), 0.15).unwrap(),
            Disk::new(&plane, plane.point_from_xy(-0.3, 0.55), 0.0).unwrap(),
        ];
        let config = Configuration::new(plane, disks).unwrap();
        let chain = hull_boundary(&config).unwrap();
        let per = hull_perimeter(&chain).unwrap();
        let tree = central_tree(&config, &chain).unwrap();
        let sharp = sharpen(&config).unwrap();
        let chain2 = hull_boundary(&sharp).unwrap();
        let report = tree_decomposition_check(&sharp).unwrap();
        println!(
            "{:?}: perimeter {:.9} (sharpened {:.9}), tree {}v/{}e, sharpened to {} disks, \
             decomposition ok={} residual={:.2e} mismatches={}/{}",
            plane.kind,
            per,
            hull_perimeter(&chain2).unwrap(),
            tree.vertices.len(),
            tree.edges.len(),
            sharp.disks.len(),
            report.ok,
            report.perimeter_residual,
            report.union_mismatches,
            report.intersection_mismatches,
        );
    }
}
