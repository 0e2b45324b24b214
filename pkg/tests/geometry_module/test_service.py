import math

import numpy as np
import pytest

from src.core_module.exceptions import GeometryError, ParameterError
from src.core_module.rng import make_rng_stream
from src.core_module.schemas import Image, BeamDescriptor, ProbeType
from src.fov_module import service as fov_service
from src.geometry_module import service
from src.geometry_module.schemas import CoordinateMap


@pytest.fixture
def oracle_beam() -> BeamDescriptor:
    return BeamDescriptor.create(probe_type=ProbeType.LINEAR, p1=(40, 20), p2=(160, 20), p3=(40, 180), p4=(160, 180))


def interior_mae(a: Image, b: Image, border: float = 0.05) -> float:
    h, w = a.height, a.width
    dy, dx = int(math.ceil(border * h)), int(math.ceil(border * w))
    diff = a.data.astype(np.float64) - b.data.astype(np.float64)
    return float(np.abs(diff[dy:h - dy, dx:w - dx]).mean())


class TestRemap:
    def test_identity_map(self, rgb_image):
        remapped = service.remap(rgb_image, CoordinateMap.identity(128, 128))
        np.testing.assert_array_equal(remapped.data, rgb_image.data)

    def test_out_of_range_map(self, rgb_image):
        coordinate_map = CoordinateMap(fx=np.full((16, 16), 1.5), fy=np.full((16, 16), -3.0))
        assert not service.remap(rgb_image, coordinate_map).data.any()

    def test_bilinear_centre(self):
        image = Image.from_array(np.array([[0, 255], [0, 255]], dtype=np.uint8))
        coordinate_map = CoordinateMap(fx=np.zeros((2, 2)), fy=np.zeros((2, 2)))
        assert service.remap(image, coordinate_map).data[0, 0, 0] in (127, 128)

    def test_constant_image_is_preserved(self):
        image = Image.from_array(np.full((32, 32), 90, dtype=np.uint8))
        coordinate_map = CoordinateMap(fx=np.linspace(-0.9, 0.9, 64).reshape(8, 8), fy=np.zeros((8, 8)))
        assert np.all(service.remap(image, coordinate_map).data == 90)


class TestLinearToConvex:
    def test_hand_derived_example(self, oracle_beam):
        coordinate_map, beam = service.linear_to_convex_map(oracle_beam, 1.5, 200, 200)
        sector = coordinate_map.sector
        assert sector.r_b == pytest.approx(240.0, rel=1e-6)
        assert sector.apex[0] == pytest.approx(100.0, rel=1e-6)
        assert sector.apex[1] == pytest.approx(-60.0, rel=1e-6)
        assert beam.p3[1] == pytest.approx(-60.0 + math.sqrt(240.0 ** 2 - 60.0 ** 2), rel=1e-6)
        assert beam.p3[1] == pytest.approx(172.379, abs=1e-3)
        assert beam.p1[0] == pytest.approx(79.344, abs=1e-3)
        assert beam.p2[0] == pytest.approx(120.656, abs=1e-3)
        assert sector.r_t == pytest.approx(19200.0 / math.sqrt(54000.0), rel=1e-6)
        assert sector.r_t == pytest.approx(82.62, abs=0.01)
        assert beam.probe_type is ProbeType.CURVILINEAR

    def test_rho_one_is_a_pie_slice(self, oracle_beam):
        coordinate_map, beam = service.linear_to_convex_map(oracle_beam, 1.0, 200, 200)
        assert coordinate_map.sector.apex == pytest.approx((100.0, 20.0))
        assert coordinate_map.sector.r_t == pytest.approx(0.0, abs=1e-9)
        assert beam.p1[0] == pytest.approx(beam.p2[0])

    @pytest.mark.parametrize('rho', [1.2, 1.5, 2.0])
    def test_symmetry_and_vertex_rows(self, oracle_beam, rho):
        coordinate_map, beam = service.linear_to_convex_map(oracle_beam, rho, 200, 200)
        assert beam.p2[0] == pytest.approx(2 * coordinate_map.sector.apex[0] - beam.p1[0])
        assert beam.p1[1] == beam.p2[1] == 20
        assert beam.p3[0] == 40 and beam.p4[0] == 160

    def test_new_vertices_map_onto_old_vertices(self, oracle_beam):
        coordinate_map, beam = service.linear_to_convex_map(oracle_beam, 1.5, 200, 200)
        source_x, source_y = coordinate_map.to_pixels(200, 200)
        for new, old in ((beam.p1, oracle_beam.p1), (beam.p2, oracle_beam.p2),
                         (beam.p3, oracle_beam.p3), (beam.p4, oracle_beam.p4)):
            col, row = min(int(round(new[0])), 199), min(int(round(new[1])), 199)
            assert math.dist((source_x[row, col], source_y[row, col]), old) < 2.0

    def test_rho_below_one(self, oracle_beam):
        with pytest.raises(ParameterError):
            service.linear_to_convex_map(oracle_beam, 0.9, 200, 200)

    def test_needs_linear_beam(self, convex_beam):
        with pytest.raises(GeometryError):
            service.linear_to_convex_map(convex_beam, 1.5, 128, 128)


class TestConvexToLinear:
    def test_top_vertices(self):
        beam = BeamDescriptor.create(probe_type=ProbeType.CURVILINEAR, p1=(80, 20), p2=(120, 20),
                                     p3=(40, 180), p4=(160, 180))
        _, linear = service.convex_to_linear_map(beam, 0.5, 200, 200)
        assert (linear.p1[0], linear.p2[0]) == pytest.approx((50.0, 150.0))
        assert (linear.p3[0], linear.p4[0]) == pytest.approx((50.0, 150.0))

    @pytest.mark.parametrize('omega', [0.3, 0.8, 1.0])
    def test_bottom_row(self, convex_beam, omega):
        _, linear = service.convex_to_linear_map(convex_beam, omega, 128, 128)
        r_b = math.dist(convex_beam.p0, convex_beam.p3)
        assert linear.p3[1] == pytest.approx(convex_beam.p0[1] + r_b)
        assert linear.p4[1] == linear.p3[1]

    def test_phased_branch(self, phased_beam):
        coordinate_map, linear = service.convex_to_linear_map(phased_beam, 0.9, 128, 128)
        assert linear.probe_type is ProbeType.LINEAR
        assert coordinate_map.sector.r_t == pytest.approx(phased_beam.p1[1] - phased_beam.p0[1])

    @pytest.mark.parametrize('rho', [1.2, 1.5, 2.0])
    def test_round_trip(self, gradient_image, full_frame_beam, rho):
        convex_map, convex = service.linear_to_convex_map(full_frame_beam, rho, 128, 128)
        curved = service.remap(gradient_image, convex_map)
        # omega that puts the linear top back on the original columns
        omega = (full_frame_beam.p2[0] - full_frame_beam.p1[0]) / 128
        linear_map, linear = service.convex_to_linear_map(convex, omega, 128, 128)
        restored = service.remap(curved, linear_map)
        assert linear.p1[0] == pytest.approx(0.0, abs=1e-9)
        assert linear.p3[1] == pytest.approx(127.0)
        assert interior_mae(restored, gradient_image) < 10


class TestConvexityChange:
    @pytest.fixture
    def wide_beam(self) -> BeamDescriptor:
        return BeamDescriptor.create(probe_type=ProbeType.CURVILINEAR, p1=(40, 20), p2=(160, 20),
                                     p3=(10, 180), p4=(190, 180))

    def test_unit_scale_is_identity_inside_the_beam(self, wide_beam):
        coordinate_map, beam = service.convexity_change_map(wide_beam, 120.0, 200, 200)
        assert (beam.p1[0], beam.p2[0]) == pytest.approx((40.0, 160.0))
        mask = fov_service.build_fov_mask(wide_beam, 200, 200).bits
        source_x, source_y = coordinate_map.to_pixels(200, 200)
        y, x = np.mgrid[0:200, 0:200]
        np.testing.assert_allclose(source_x[mask], x[mask], atol=1e-6)
        np.testing.assert_allclose(source_y[mask], y[mask], atol=1e-6)

    def test_half_scale(self, wide_beam):
        _, beam = service.convexity_change_map(wide_beam, 60.0, 200, 200)
        assert (beam.p1[0], beam.p2[0]) == pytest.approx((70.0, 130.0))

    @pytest.mark.parametrize('w_prime', [40.0, 90.0, 150.0])
    def test_vertex_rows_are_kept(self, wide_beam, w_prime):
        coordinate_map, beam = service.convexity_change_map(wide_beam, w_prime, 200, 200)
        assert beam.p1[1] == 20 and beam.p3[1] == 180
        assert beam.p0 == pytest.approx(coordinate_map.sector.apex)

    def test_parallel_lateral_lines(self, wide_beam):
        # top as wide as the bottom
        with pytest.raises(GeometryError):
            service.convexity_change_map(wide_beam, 180.0, 200, 200)

    def test_zero_width_top(self, oracle_beam):
        _, pie = service.linear_to_convex_map(oracle_beam, 1.0, 200, 200)
        with pytest.raises(GeometryError):
            service.convexity_change_map(pie, 10.0, 200, 200)


class TestProbeTypeChange:
    def test_linear_becomes_curvilinear(self, textured_image, linear_beam):
        out, beam = service.probe_type_change(textured_image, linear_beam, make_rng_stream(1, 0, 0))
        assert beam.probe_type is ProbeType.CURVILINEAR
        mask = fov_service.build_fov_mask(beam, 128, 128)
        assert not out.data[~mask.bits].any()

    def test_phased_becomes_linear(self, textured_image, phased_beam):
        out, beam = service.probe_type_change(textured_image, phased_beam, make_rng_stream(1, 0, 0))
        assert beam.probe_type is ProbeType.LINEAR
        assert (out.height, out.width) == (128, 128)

    def test_replay(self, textured_image, convex_beam):
        first = service.probe_type_change(textured_image, convex_beam, make_rng_stream(3, 4, 0))
        second = service.probe_type_change(textured_image, convex_beam, make_rng_stream(3, 4, 0))
        np.testing.assert_array_equal(first[0].data, second[0].data)
        assert first[1] == second[1]

    def test_draw_count(self, textured_image, convex_beam):
        stream = make_rng_stream(3, 4, 0)
        service.probe_type_change(textured_image, convex_beam, stream)
        assert stream.draw_counter == 2

    def test_original_aspect_keeps_frame_size(self, textured_image, linear_beam):
        beam = BeamDescriptor.create(**{**linear_beam.dict(), 'original_aspect': 1.5})
        out, new_beam = service.probe_type_change(textured_image, beam, make_rng_stream(2, 0, 0))
        assert (out.height, out.width) == (128, 128)
        assert new_beam.original_aspect == 1.5

    def test_linearize_passes_linear_beams_through(self, textured_image, linear_beam):
        out, beam = service.linearize(textured_image, linear_beam)
        assert out is textured_image and beam is linear_beam


class TestDepthChange:
    def test_unit_depth_is_identity(self, textured_image, full_frame_beam):
        out = service.depth_change(textured_image, full_frame_beam, 1.0)
        np.testing.assert_array_equal(out.data, textured_image.data)

    def test_apex_is_a_fixed_point(self):
        beam = BeamDescriptor.create(probe_type=ProbeType.PHASED_ARRAY, p1=(63, 10), p2=(65, 10),
                                     p3=(19, 98), p4=(109, 98))
        assert beam.p0 == pytest.approx((64.0, 8.0))
        for d in (0.8, 1.2):
            source_x, source_y = service.zoom_map(beam, d, 128, 128).to_pixels(128, 128)
            assert (source_x[8, 64], source_y[8, 64]) == pytest.approx((64.0, 8.0), abs=1e-9)

    def test_zoom_out_shrinks_content(self, full_frame_beam):
        image = Image.from_array(np.full((128, 128), 200, dtype=np.uint8))
        out = service.depth_change(image, full_frame_beam, 2.0)
        assert out.data[64, 64, 0] == 200
        assert out.data[0, 0, 0] == 0 and out.data[127, 127, 0] == 0

    def test_silhouette_is_unchanged(self, textured_image, convex_beam):
        mask = fov_service.build_fov_mask(convex_beam, 128, 128)
        out = service.depth_change(textured_image, convex_beam, 0.8)
        assert not out.data[~mask.bits].any()

    def test_non_positive_depth(self, textured_image, full_frame_beam):
        with pytest.raises(ParameterError):
            service.depth_change(textured_image, full_frame_beam, 0.0)
