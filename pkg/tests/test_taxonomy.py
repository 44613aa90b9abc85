from __future__ import annotations

import json
from itertools import combinations

import pytest

from nrts.bundle import default_bundle_path
from nrts.taxonomy import ActionTaxonomy, TaxonomyError, parse_taxonomy

from oracles import brute_force_lca


def test_single_node_document():
    taxonomy = parse_taxonomy('{"root": "resuscitation"}')
    assert len(taxonomy) == 1
    assert taxonomy.depth("resuscitation") == 0
    assert taxonomy.root == "resuscitation"


def test_default_file_reserializes_to_itself():
    path = default_bundle_path() / "taxonomy.json"
    text = path.read_text(encoding="utf-8")
    taxonomy = parse_taxonomy(text)
    assert json.loads(taxonomy.serialize()) == json.loads(text)
    assert taxonomy.root == "resuscitation"
    for category in ("airway", "breathing", "circulation", "thermal", "assessment"):
        assert category in taxonomy
        assert taxonomy.parent_of(category) == "resuscitation"


def test_round_trip_is_stable():
    text = (default_bundle_path() / "taxonomy.json").read_text(encoding="utf-8")
    once = parse_taxonomy(text)
    twice = parse_taxonomy(once.serialize())
    assert once == twice
    assert once.serialize() == twice.serialize()


def test_cycle_reported_with_offending_id():
    doc = '{"root": "r", "nodes": {"a": "b", "b": "a"}}'
    with pytest.raises(TaxonomyError) as err:
        parse_taxonomy(doc)
    assert err.value.offending_id == "a"
    assert "cycle" in str(err.value)


def test_duplicate_id_in_nodes():
    doc = '{"root": "r", "nodes": {"a": "r", "a": "r"}}'
    with pytest.raises(TaxonomyError) as err:
        parse_taxonomy(doc)
    assert err.value.offending_id == "a"


def test_duplicate_of_root():
    with pytest.raises(TaxonomyError) as err:
        parse_taxonomy('{"root": "r", "nodes": {"r": "r"}}')
    assert err.value.offending_id == "r"


def test_multiple_roots():
    with pytest.raises(TaxonomyError) as err:
        parse_taxonomy('{"root": "r", "nodes": {"a": null}}')
    assert err.value.offending_id == "a"
    assert "multiple roots" in str(err.value)


def test_dangling_parent():
    with pytest.raises(TaxonomyError) as err:
        parse_taxonomy('{"root": "r", "nodes": {"a": "ghost"}}')
    assert err.value.offending_id == "ghost"
    assert "dangling" in str(err.value)


def test_malformed_json_and_unknown_keys():
    with pytest.raises(TaxonomyError):
        parse_taxonomy("{not json")
    with pytest.raises(TaxonomyError):
        parse_taxonomy('{"root": "r", "extra": 1}')
    with pytest.raises(TaxonomyError):
        parse_taxonomy('{"nodes": {}}')


def test_depth_invariant_holds_everywhere(default_gold):
    taxonomy = default_gold.taxonomy
    assert taxonomy.depth(taxonomy.root) == 0
    for node in taxonomy.nodes:
        parent = taxonomy.parent_of(node)
        if parent is not None:
            assert taxonomy.depth(node) == taxonomy.depth(parent) + 1


def test_lca_matches_ancestor_set_oracle(default_gold):
    taxonomy = default_gold.taxonomy
    for a, b in combinations(sorted(taxonomy.nodes), 2):
        assert taxonomy.lca(a, b) == brute_force_lca(a, b, taxonomy)
        assert taxonomy.lca(a, b) == taxonomy.lca(b, a)
    for node in taxonomy.nodes:
        assert taxonomy.lca(node, node) == node


def test_siblings_and_children(default_gold):
    taxonomy = default_gold.taxonomy
    assert "warm_infant" in taxonomy.siblings_of("dry_infant")
    assert "dry_infant" not in taxonomy.siblings_of("dry_infant")
    assert taxonomy.siblings_of(taxonomy.root) == ()
    assert set(taxonomy.children_of("thermal")) >= {"dry_infant", "warm_infant"}


def test_unresolved_id_raises(default_gold):
    with pytest.raises(TaxonomyError):
        default_gold.taxonomy.depth("warp-drive")


def test_deep_chain_depths():
    taxonomy = ActionTaxonomy("r", {"a": "r", "b": "a", "c": "b", "d": "c"})
    assert [taxonomy.depth(n) for n in "abcd"] == [1, 2, 3, 4]
    assert taxonomy.ancestors_of("d") == ("d", "c", "b", "a", "r")
