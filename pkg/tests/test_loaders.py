"""
输入文件加载与格式校验
"""
import json

import pytest

from core.cyclotomic import CyclotomicNumber
from core.exceptions import ElementNotInGroup, InputError, NotBijective
from core.grp import symmetric_group
from core.loaders import build_bundle, build_space, load_bundle, load_group, load_space, read_spec
from core.schemas import BundleSpec, GroupSpec, SpaceSpec


def space_spec(**overrides) -> SpaceSpec:
    raw = {
        "vertices": 4,
        "simplices": [[0, 1], [1, 2], [2, 3], [0, 3]],
        "group": {"points": 2, "generators": [[1, 0]]},
        "action": {"gen0": [0, 3, 2, 1]},
    }
    raw.update(overrides)
    return SpaceSpec.model_validate(raw)


def test_groups(data_dir):
    assert load_group(data_dir / "groups" / "s3.json").order == 6
    assert load_group(data_dir / "groups" / "q8.json").order == 8
    assert load_group(data_dir / "groups" / "trivial.json").order == 1
    assert load_group(data_dir / "groups" / "z4.json").exponent == 4


def test_non_bijective_generator(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"points": 3, "generators": [[0, 0, 1]]}), encoding="utf-8")
    with pytest.raises(NotBijective):
        load_group(path)


def test_space_file(data_dir):
    K = load_space(data_dir / "spaces" / "circle_reflection.json")
    assert K.name == "circle_reflection"
    assert K.complex.f_vector() == [4, 4]
    assert K.group.order == 2
    assert K.orientation.sign((0, 1)) == 1
    assert K.orientation.sign((0, 3)) == -1
    assert K.act(1, 1) == 3


def test_space_with_external_group(data_dir):
    K = load_space(data_dir / "spaces" / "point_z2.json", load_group(data_dir / "groups" / "z2.json"))
    assert K.group.order == 2
    assert K.act(1, 0) == 0


def test_builtin_data_files_load(data_dir):
    for path in sorted((data_dir / "spaces").glob("*.json")):
        assert load_space(path).name == path.stem


def test_read_errors(tmp_path):
    with pytest.raises(InputError):
        read_spec(tmp_path / "missing.json", GroupSpec)
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(InputError):
        read_spec(broken, GroupSpec)
    invalid = tmp_path / "invalid.json"
    invalid.write_text(json.dumps({"vertices": -1}), encoding="utf-8")
    with pytest.raises(InputError):
        read_spec(invalid, SpaceSpec)


def test_space_validation():
    assert build_space(space_spec()).complex.f_vector() == [4, 4]
    assert build_space(space_spec(action={})).act(1, 1) == 1
    bad_specs = [
        space_spec(simplices=[[0, 7]]),
        space_spec(action={"g0": [0, 3, 2, 1]}),
        space_spec(action={"gen3": [0, 3, 2, 1]}),
        space_spec(action={"gen0": [0, 2, 1, 3]}),
        space_spec(action={"gen0": [0, 1]}),
        space_spec(orientation={"top_signs": {"0,1": 2}}),
        space_spec(orientation={"top_signs": {"a,b": 1}}),
        space_spec(fixed_orientations={"x": {"top_signs": {}}}),
    ]
    for spec in bad_specs:
        with pytest.raises(InputError):
            build_space(spec)


def test_partial_action_rejected():
    spec = SpaceSpec.model_validate({
        "vertices": 3,
        "group": {"points": 3, "generators": [[1, 0, 2], [1, 2, 0]]},
        "action": {"gen0": [1, 0, 2]},
    })
    with pytest.raises(InputError):
        build_space(spec)


def test_bundles(data_dir):
    point = load_space(data_dir / "spaces" / "point_z2.json")
    sign = load_bundle(data_dir / "bundles" / "z2_sign.json", point)
    assert sign.name == "sign"
    assert sign.matrix(1, 0) == [[-1]]
    assert sign.matrix(0, 0) == [[1]]

    point3 = load_space(data_dir / "spaces" / "point_z3.json")
    zeta = load_bundle(data_dir / "bundles" / "z3_zeta.json", point3)
    assert zeta.order == 3
    assert zeta.matrix(1, 0)[0][0] == CyclotomicNumber.zeta(3)


def test_bundle_validation(data_dir):
    point = build_space(SpaceSpec.model_validate({"vertices": 1, "group": {"points": 2, "generators": [[1, 0]]}}))
    bad_specs = [
        {"fiber_dim": 2, "rho": {"1": {"0": [[1]]}}},
        {"fiber_dim": 1, "rho": {"1": {"4": [[1]]}}},
        {"fiber_dim": 1, "rho": {"x": {"0": [[1]]}}},
        {"fiber_dim": 1, "rho": {"1": {"0": [["1/0"]]}}},
    ]
    for raw in bad_specs:
        with pytest.raises(InputError):
            build_bundle(BundleSpec.model_validate(raw), point)
    with pytest.raises(ElementNotInGroup):
        build_bundle(BundleSpec.model_validate({"fiber_dim": 1, "rho": {"9": {"0": [[1]]}}}), point)


def test_explicit_group_must_match_generators():
    with pytest.raises(InputError):
        build_space(space_spec(), symmetric_group(3))
