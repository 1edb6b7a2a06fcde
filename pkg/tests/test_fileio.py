import json

import pytest

from clearmatch import LiftingSet, ViewLayout, build_aggregate
from clearmatch.fileio import (
    association_payload,
    dumps,
    lifting_payload,
    load_association,
    load_lifting,
)
from conftest import SEVEN_LAYOUT, SEVEN_QUADS


class TestAssociationRoundtrip:
    def test_roundtrip(self, seven):
        data = json.loads(dumps(association_payload(seven)))
        again = load_association(data)
        assert again.layout == seven.layout
        assert again.edges == seven.edges

    def test_canonical_bytes(self, seven):
        assert dumps(association_payload(seven)) == dumps(association_payload(seven))
        # re-encoding a decoded document is byte-stable
        text = dumps(association_payload(seven))
        redone = dumps(association_payload(load_association(json.loads(text))))
        assert redone == text

    def test_edges_serialized_as_quads(self, seven):
        payload = association_payload(seven)
        assert payload["views"] == [2, 1, 1, 1, 1, 1]
        assert payload["edges"][0] == [0, 0, 1, 0]
        assert len(payload["edges"]) == len(SEVEN_QUADS)

    def test_extra_keys_ignored(self, seven):
        payload = association_payload(seven)
        payload["objective"] = 1.79
        assert load_association(payload).edges == seven.edges


class TestLiftingRoundtrip:
    def test_roundtrip(self):
        lift = LiftingSet(SEVEN_LAYOUT, 2, ((0, 1), (0,), (1,), (1,), (1,), (1,)))
        again = load_lifting(json.loads(dumps(lifting_payload(lift))))
        assert again == lift


class TestMalformedDocuments:
    def test_not_an_object(self):
        with pytest.raises(ValueError, match="JSON object"):
            load_association([1, 2])

    def test_views_field(self):
        with pytest.raises(ValueError, match='"views"'):
            load_association({"edges": []})
        with pytest.raises(ValueError, match='"views"'):
            load_association({"views": [2, -1], "edges": []})
        with pytest.raises(ValueError, match='"views"'):
            load_association({"views": [2.5], "edges": []})

    def test_edges_field(self):
        with pytest.raises(ValueError, match='"edges"'):
            load_association({"views": [1, 1]})
        with pytest.raises(ValueError, match='"edges"\\[0\\]'):
            load_association({"views": [1, 1], "edges": [[0, 0, 1]]})
        with pytest.raises(ValueError, match='"edges"\\[1\\]'):
            load_association(
                {"views": [1, 1], "edges": [[0, 0, 1, 0], [0, 0, 1, "x"]]}
            )

    def test_semantic_errors_delegate_to_model(self):
        from clearmatch import IndexOutOfRange, SameViewEdge

        with pytest.raises(IndexOutOfRange):
            load_association({"views": [1, 1], "edges": [[0, 1, 1, 0]]})
        with pytest.raises(SameViewEdge):
            load_association({"views": [2, 1], "edges": [[0, 0, 0, 1]]})

    def test_lifting_fields(self):
        with pytest.raises(ValueError, match='"universe_size"'):
            load_lifting({"views": [1], "assignment": [[0]]})
        with pytest.raises(ValueError, match='"assignment"'):
            load_lifting({"views": [1], "universe_size": 1})
        with pytest.raises(ValueError, match='"assignment"'):
            load_lifting({"views": [1], "universe_size": 1, "assignment": [["a"]]})
