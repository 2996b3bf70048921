//! Regenerate the fixture files shipped under fixtures/.

use std::fs;
use std::path::Path;
use turaev_viro::category::{builtin_fibonacci, builtin_fibonacci_complex, builtin_vec_g};
use turaev_viro::center::{fib_center_simples, vec_g_center_simples};
use turaev_viro::complex::canned;
use turaev_viro::group::GroupTable;
use turaev_viro::io::{serialize_category, serialize_center, serialize_manifold, ManifoldExtras};

fn main() {
    let dir = Path::new("crates/turaev-viro/fixtures");
    fs::create_dir_all(dir).unwrap();
    let w = |name: &str, text: String| {
        fs::write(dir.join(name), text).unwrap();
        println!("wrote {name}");
    };

    let z2 = builtin_vec_g("vec-z2", &GroupTable::cyclic(2)).unwrap();
    let z3 = builtin_vec_g("vec-z3", &GroupTable::cyclic(3)).unwrap();
    let s3 = builtin_vec_g("vec-s3", &GroupTable::s3()).unwrap();
    let fib = builtin_fibonacci().unwrap();
    let fibc = builtin_fibonacci_complex().unwrap();
    w("vec-z2.cat", serialize_category(&z2));
    w("vec-z3.cat", serialize_category(&z3));
    w("vec-s3.cat", serialize_category(&s3));
    w("fibonacci.cat", serialize_category(&fib));
    w("fibonacci-complex.cat", serialize_category(&fibc));

    let c2 = vec_g_center_simples(&z2, &GroupTable::cyclic(2)).unwrap();
    for (k, y) in c2.objects.iter().enumerate() {
        w(&format!("center-z2-{k}.ctr"), serialize_center(&z2, y));
    }
    let cf = fib_center_simples(&fibc).unwrap();
    for (k, y) in cf.iter().enumerate() {
        w(&format!("center-fib-{k}.ctr"), serialize_center(&fibc, y));
    }

    for name in ["s3-two-tet", "s3-onecell", "s2xs1", "t3", "torus-min", "s2-min"] {
        let cx = canned(name).unwrap();
        w(&format!("{name}.cw"), serialize_manifold(&cx, &ManifoldExtras::default()));
    }
    for (p, q) in [(2usize, 1usize), (3, 1)] {
        let cx = canned(&format!("lens({p},{q})")).unwrap();
        w(&format!("lens-{p}-{q}.cw"), serialize_manifold(&cx, &ManifoldExtras::default()));
    }
    // a triangulation-format file
    w(
        "s3.tri",
        "manifold s3\ntri\ntet 0 : 1:0123 1:0123 1:0123 1:0123\n\
         tet 1 : 0:0123 0:0123 0:0123 0:0123\n"
            .to_string(),
    );
    // an eval-graph debug file: theta graph over vec-z2
    w(
        "theta.graph",
        "graph\ncoupon 0 : g1 g1 g0\ncoupon 1 : g0 g1 g1\n\
         edge 0.0=1.2\nedge 0.1=1.1\nedge 0.2=1.0\n"
            .to_string(),
    );
    // a move script usable against s3-two-tet
    w("moves-example.txt", "invM1 0\nM1 4\n".to_string());

    // an extended manifold: the cylinder over the 1-punctured sphere with
    // one open tube, serialized with its extras
    {
        use turaev_viro::complex::n_punctured_sphere;
        use turaev_viro::extended::{ext_cylinder, ExtendedSurface};
        let ps = n_punctured_sphere(1);
        let s = ExtendedSurface { base: ps.complex, disks: ps.disks, marked: ps.marked };
        let colors = vec![turaev_viro::center::CenterObject::unit(&z2)];
        let ec = ext_cylinder(&z2, &s, &colors).unwrap();
        let extras = ManifoldExtras {
            disks: vec![],
            tubes: ec
                .manifold
                .tubes
                .iter()
                .map(|t| turaev_viro::io::TubeSpec {
                    open: true,
                    cell: t.cell,
                    bottom: t.bottom,
                    top: t.top,
                    marked_bottom: t.marked_bottom,
                    marked_top: t.marked_top,
                    color: t.color,
                    longitude: t.longitude.clone(),
                })
                .collect(),
        };
        w("tube-cylinder.cw", serialize_manifold(&ec.manifold.base, &extras));
    }
    // a surface with disks
    {
        use turaev_viro::complex::n_punctured_sphere;
        let ps = n_punctured_sphere(2);
        let extras = ManifoldExtras {
            disks: ps.disks.iter().zip(&ps.marked).map(|(&f, &v)| (f, v)).collect(),
            tubes: vec![],
        };
        w("two-punctured-sphere.cw", serialize_manifold(&ps.complex, &extras));
    }
}
