import json

import pytest

from gradext.errors import ValidationError
from gradext.lab import fixtures as fx
from gradext.lab.documents import parse_document, serialize


def test_fixture_set():
    assert len(fx.FIXTURES) == 12
    assert {"c2_group_algebra_p2", "v4_group_algebra_p2_c2graded", "morita_f2c2"} <= set(fx.FIXTURES)


@pytest.mark.parametrize("name", fx.FIXTURES)
def test_shipped_files_are_regenerated_exactly(name):
    assert serialize(fx.build(name)) == fx.fixture_text(name)


@pytest.mark.parametrize("name", [n for n in fx.FIXTURES if fx.build(n).finite_type])
def test_certificates_verify(name):
    fx.verify_certificate(parse_document(fx.fixture_text(name)))


def test_wrong_certificate_is_caught():
    doc = json.loads(fx.fixture_text("nakayama_x3_p2"))
    doc["metadata"]["finite_type"]["indecomposables"] = 4
    inst = parse_document(json.dumps(doc))
    with pytest.raises(ValidationError) as err:
        fx.verify_certificate(inst)
    assert err.value.pointer == "/metadata/finite_type"


def test_too_small_certificate_bound_is_caught():
    # V4 has more indecomposables in dimension 3 than in dimension 2
    doc = json.loads(fx.fixture_text("v4_group_algebra_p2_c2graded"))
    doc["metadata"]["finite_type"] = {"indecomposables": 4, "max_dim": 2}
    with pytest.raises(ValidationError):
        fx.verify_certificate(parse_document(json.dumps(doc)))


def test_unknown_fixture():
    with pytest.raises(ValidationError):
        fx.load("nope")


def test_write_all(tmp_path):
    paths = fx.write_all(tmp_path)
    assert len(paths) == len(fx.FIXTURES)
    for p in paths:
        assert p.read_text() == fx.fixture_text(p.stem)
