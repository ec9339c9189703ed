"""Wire-contract tests: endpoint payloads, schemas, errors, concurrency."""

import math
from concurrent.futures import ThreadPoolExecutor

import pytest

WORDS = ["the", "goodness", "insubstantial", "sweet", "badness"]


def strip_markers(tokens):
    return "".join(token.removeprefix("##") for token in tokens)


class TestHealth:
    def test_ok_with_sorted_model_names(self, client, check_schema):
        response = client.get("/v1/health")
        assert response.status_code == 200
        body = check_schema(response.json(), "health_response")
        assert body == {"status": "ok", "models": ["unit-base", "unit-wide"]}


class TestTokenize:
    def call(self, client, check_schema, payload):
        check_schema(payload, "tokenize_request")
        response = client.post("/v1/tokenize", json=payload)
        assert response.status_code == 200
        return check_schema(response.json(), "tokenize_response")

    def test_results_in_request_order(self, client, check_schema):
        body = self.call(client, check_schema, {"model": "unit-base", "words": WORDS})
        assert [item["word"] for item in body["results"]] == WORDS

    def test_marker_stripped_concatenation_restores_word(self, client, check_schema):
        body = self.call(client, check_schema, {"model": "unit-base", "words": WORDS})
        for item in body["results"]:
            assert strip_markers(item["tokens"]) == item["word"]

    def test_known_subword_split(self, client, check_schema):
        body = self.call(
            client, check_schema, {"model": "unit-base", "words": ["insubstantial"]}
        )
        assert body["results"][0]["tokens"] == ["ins", "##ubst", "##antial"]

    def test_single_piece_word(self, client, check_schema):
        body = self.call(client, check_schema, {"model": "unit-base", "words": ["the"]})
        assert body["results"][0]["tokens"] == ["the"]

    def test_uncoverable_word_returns_unk_token(self, client, check_schema):
        body = self.call(client, check_schema, {"model": "unit-base", "words": ["x9x"]})
        assert body["results"][0]["tokens"] == ["[UNK]"]

    def test_overlong_word_returns_unk_token(self, client, check_schema):
        body = self.call(
            client, check_schema, {"model": "unit-base", "words": ["x" * 122]}
        )
        assert body["results"][0]["tokens"] == ["[UNK]"]


class TestEmbed:
    def call(self, client, check_schema, payload):
        check_schema(payload, "embed_request")
        response = client.post("/v1/embed", json=payload)
        assert response.status_code == 200
        return check_schema(response.json(), "embed_response")

    def test_single_word_contract(self, client, check_schema):
        body = self.call(client, check_schema, {"model": "unit-base", "words": ["the"]})
        assert body["model"] == "unit-base"
        assert body["dim"] == 32
        (result,) = body["results"]
        assert result["word"] == "the"
        assert len(result["tokens"]) >= 1
        assert len(result["vectors"]) == len(result["tokens"])

    def test_vectors_aligned_and_dim_wide(self, client, check_schema):
        body = self.call(client, check_schema, {"model": "unit-base", "words": WORDS})
        for item in body["results"]:
            assert len(item["vectors"]) == len(item["tokens"])
            for vector in item["vectors"]:
                assert len(vector) == body["dim"]
                assert all(math.isfinite(component) for component in vector)

    def test_dim_tracks_the_model(self, client, check_schema):
        wide = self.call(client, check_schema, {"model": "unit-wide", "words": ["the"]})
        assert wide["dim"] == 48

    def test_tokens_match_tokenize_endpoint(self, client, check_schema):
        embedded = self.call(client, check_schema, {"model": "unit-base", "words": WORDS})
        tokenized = client.post(
            "/v1/tokenize", json={"model": "unit-base", "words": WORDS}
        ).json()
        assert [item["tokens"] for item in embedded["results"]] == [
            item["tokens"] for item in tokenized["results"]
        ]

    def test_identical_requests_identical_bytes(self, client):
        payload = {"model": "unit-base", "words": WORDS, "layer": -1}
        first = client.post("/v1/embed", json=payload)
        second = client.post("/v1/embed", json=payload)
        assert first.content == second.content

    def test_default_layer_is_last(self, client):
        words = {"model": "unit-base", "words": ["goodness"]}
        implicit = client.post("/v1/embed", json=words)
        explicit = client.post("/v1/embed", json={**words, "layer": 2})
        assert implicit.content == explicit.content

    def test_embedding_layer_gives_different_vectors(self, client):
        words = {"model": "unit-base", "words": ["goodness"]}
        bottom = client.post("/v1/embed", json={**words, "layer": 0}).json()
        top = client.post("/v1/embed", json={**words, "layer": -1}).json()
        assert bottom["results"][0]["vectors"] != top["results"][0]["vectors"]


class TestErrors:
    def assert_error(self, response, status, check_schema, fragment=""):
        assert response.status_code == status
        body = check_schema(response.json(), "error_response")
        assert fragment in body["error"]

    def test_unknown_model_embed_404(self, client, check_schema):
        response = client.post("/v1/embed", json={"model": "nope", "words": ["the"]})
        self.assert_error(response, 404, check_schema, "nope")

    def test_unknown_model_tokenize_404(self, client, check_schema):
        response = client.post("/v1/tokenize", json={"model": "nope", "words": ["the"]})
        self.assert_error(response, 404, check_schema, "nope")

    def test_unknown_route_404_keeps_error_shape(self, client, check_schema):
        self.assert_error(client.get("/v1/nothing"), 404, check_schema)

    def test_empty_words_400(self, client, check_schema):
        response = client.post("/v1/embed", json={"model": "unit-base", "words": []})
        self.assert_error(response, 400, check_schema, "malformed request")

    def test_missing_model_field_400(self, client, check_schema):
        response = client.post("/v1/embed", json={"words": ["the"]})
        self.assert_error(response, 400, check_schema, "model")

    def test_wrong_words_type_400(self, client, check_schema):
        response = client.post("/v1/embed", json={"model": "unit-base", "words": "the"})
        self.assert_error(response, 400, check_schema, "malformed request")

    def test_empty_word_string_400(self, client, check_schema):
        response = client.post("/v1/embed", json={"model": "unit-base", "words": [""]})
        self.assert_error(response, 400, check_schema, "malformed request")

    def test_unexpected_field_400(self, client, check_schema):
        response = client.post(
            "/v1/embed",
            json={"model": "unit-base", "words": ["the"], "sentences": True},
        )
        self.assert_error(response, 400, check_schema, "malformed request")

    def test_unparseable_body_400(self, client, check_schema):
        response = client.post(
            "/v1/embed",
            content=b"{not json",
            headers={"content-type": "application/json"},
        )
        self.assert_error(response, 400, check_schema, "malformed request")

    def test_non_integer_layer_400(self, client, check_schema):
        response = client.post(
            "/v1/embed",
            json={"model": "unit-base", "words": ["the"], "layer": "last"},
        )
        self.assert_error(response, 400, check_schema, "layer")

    @pytest.mark.parametrize("layer", [3, 99, -4])
    def test_out_of_range_layer_400(self, client, check_schema, layer):
        response = client.post(
            "/v1/embed", json={"model": "unit-base", "words": ["the"], "layer": layer}
        )
        self.assert_error(response, 400, check_schema, "out of range")

    def test_whitespace_word_produces_no_tokens_400(self, client, check_schema):
        for endpoint in ("/v1/tokenize", "/v1/embed"):
            response = client.post(endpoint, json={"model": "unit-base", "words": [" "]})
            self.assert_error(response, 400, check_schema, "produced no tokens")


class TestConcurrency:
    def test_parallel_identical_requests_agree(self, client):
        payload = {"model": "unit-base", "words": WORDS}
        baseline = client.post("/v1/embed", json=payload).content

        def call(_):
            return client.post("/v1/embed", json=payload).content

        with ThreadPoolExecutor(max_workers=8) as pool:
            bodies = list(pool.map(call, range(16)))
        assert all(body == baseline for body in bodies)

    def test_parallel_mixed_requests_match_serial(self, client):
        payloads = [{"model": "unit-base", "words": [word]} for word in WORDS]
        payloads += [{"model": "unit-wide", "words": [word]} for word in WORDS]
        serial = [client.post("/v1/embed", json=payload).content for payload in payloads]

        def call(payload):
            return client.post("/v1/embed", json=payload).content

        with ThreadPoolExecutor(max_workers=8) as pool:
            parallel = list(pool.map(call, payloads))
        assert parallel == serial
