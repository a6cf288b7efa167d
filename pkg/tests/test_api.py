import time

import pytest
from fastapi.testclient import TestClient

from condlens.api import CompareRequest, create_app
from condlens.lexicons import PLUTCHIK_CATEGORIES
from condlens.store import read_bundle

RA = "69896004"
NORTH_NORFOLK = "E07000147"
ROCHDALE = "E08000005"


@pytest.fixture(scope="module")
def client(demo_bundle):
    return TestClient(create_app(demo_bundle))


class TestCompareRequest:
    def test_bounds(self):
        CompareRequest("c", ("a",))
        CompareRequest("c", ("a", "b", "c", "d"))
        with pytest.raises(ValueError):
            CompareRequest("c", ())
        with pytest.raises(ValueError):
            CompareRequest("c", ("a", "b", "c", "d", "e"))
        with pytest.raises(ValueError):
            CompareRequest("c", ("a", "a"))


class TestEndpoints:
    def test_conditions_catalog(self, client):
        body = client.get("/api/v1/conditions").json()
        assert len(body["conditions"]) == 13
        names = {c["name"] for c in body["conditions"]}
        assert "Rheumatoid arthritis" in names

    def test_profile_groups_and_metadata(self, client):
        body = client.get(f"/api/v1/conditions/{RA}/profile").json()
        for group in ("symptoms", "drugs"):
            assert set(body[group]) == {"expected", "emerging"}
        entry = body["symptoms"]["expected"][0]
        assert {"concept_id", "name", "weight", "count", "df", "conditions"} <= set(entry)
        assert len(entry["conditions"]) == entry["df"]

    def test_emotions_full_ranked_list(self, client):
        body = client.get(f"/api/v1/conditions/{RA}/emotions").json()
        assert set(body["emotions"]["scores"]) == set(PLUTCHIK_CATEGORIES)
        assert sorted(body["emotions"]["rank"]) == sorted(PLUTCHIK_CATEGORIES)

    def test_bodymap(self, client):
        body = client.get(f"/api/v1/conditions/{RA}/bodymap").json()
        assert body["zones"]
        for zone in body["zones"]:
            assert zone["weight"] >= 0

    def test_prevalence_regions(self, client):
        body = client.get(f"/api/v1/conditions/{RA}/prevalence").json()
        assert len(body["regions"]) == 12
        for region in body["regions"]:
            assert {"code", "rate", "delta_from_mean", "z", "z_display"} <= set(region)

    def test_region_indicators(self, client):
        body = client.get(f"/api/v1/regions/{ROCHDALE}").json()
        assert body["z"]["deprivation"] > 1.0

    def test_unknown_condition_404(self, client):
        response = client.get("/api/v1/conditions/000/profile")
        assert response.status_code == 404
        assert response.json()["detail"]["condition_id"] == "000"

    def test_unknown_region_404_names_code(self, client):
        response = client.get("/api/v1/regions/E99")
        assert response.status_code == 404
        assert response.json()["detail"]["region"] == "E99"


class TestCompare:
    def test_single_region(self, client):
        body = client.get(
            "/api/v1/compare", params={"condition": RA, "regions": NORTH_NORFOLK}
        ).json()
        assert len(body["regions"]) == 1
        assert body["axis_order"] == ["prevalence", "population", "density", "deprivation"]

    def test_five_regions_rejected(self, client):
        response = client.get(
            "/api/v1/compare", params={"condition": RA, "regions": "a,b,c,d,e"}
        )
        assert response.status_code == 400
        assert response.json()["detail"]["error"] == "TooManyRegions"

    def test_duplicate_regions_rejected(self, client):
        response = client.get(
            "/api/v1/compare",
            params={"condition": RA, "regions": f"{ROCHDALE},{ROCHDALE}"},
        )
        assert response.status_code == 400

    def test_unknown_region_named(self, client):
        response = client.get(
            "/api/v1/compare", params={"condition": RA, "regions": "E00"}
        )
        assert response.status_code == 404
        assert response.json()["detail"]["region"] == "E00"

    def test_rochdale_more_deprived_than_north_norfolk(self, client):
        body = client.get(
            "/api/v1/compare",
            params={"condition": RA, "regions": f"{NORTH_NORFOLK},{ROCHDALE}"},
        ).json()
        z = {r["code"]: r["axes"]["deprivation"]["z"] for r in body["regions"]}
        assert z[ROCHDALE] > z[NORTH_NORFOLK]


class TestServingProperties:
    def test_two_servers_byte_identical(self, demo_bundle):
        a, b = TestClient(create_app(demo_bundle)), TestClient(create_app(demo_bundle))
        for path in (
            "/api/v1/conditions",
            f"/api/v1/conditions/{RA}/profile",
            f"/api/v1/conditions/{RA}/prevalence",
            f"/api/v1/regions/{ROCHDALE}",
            f"/api/v1/compare?condition={RA}&regions={ROCHDALE}",
        ):
            assert a.get(path).content == b.get(path).content

    def test_etag_is_bundle_digest(self, client, demo_bundle):
        digest = read_bundle(demo_bundle).bundle_digest
        response = client.get("/api/v1/conditions")
        assert response.headers["ETag"] == f'"{digest}"'

    def test_responses_under_50ms(self, client):
        paths = [
            "/api/v1/conditions",
            f"/api/v1/conditions/{RA}/profile",
            f"/api/v1/conditions/{RA}/emotions",
            f"/api/v1/conditions/{RA}/prevalence",
            f"/api/v1/compare?condition={RA}&regions={ROCHDALE},{NORTH_NORFOLK}",
        ]
        client.get(paths[0])  # warm up
        for path in paths:
            started = time.perf_counter()
            response = client.get(path)
            elapsed = time.perf_counter() - started
            assert response.status_code == 200
            assert elapsed < 0.050, f"{path} took {elapsed * 1000:.1f} ms"

    def test_hot_reload_swaps_snapshot(self, demo_bundle):
        app = create_app(demo_bundle)
        before = app.state.snapshot
        app.state.reload_snapshot()
        assert app.state.snapshot is not before
        assert app.state.snapshot.etag == before.etag
