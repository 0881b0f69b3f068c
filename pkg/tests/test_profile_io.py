import numpy as np
import pytest

from bvpkit.models.core import SolutionProfile
from bvpkit.models.errors import DomainError
from bvpkit.utils.profile_io import read_profile_csv, write_profile_csv


def test_two_point_profile(tmp_path):
    path = tmp_path / 'profile.csv'
    write_profile_csv(SolutionProfile(abscissae=[0.0, 1.0], values=[1.0, 0.0]), path)
    text = path.read_text(encoding='utf-8')
    assert text == 'r,v\n0,1\n1,0\n'


def test_round_trip_is_bit_exact(tmp_path):
    path = tmp_path / 'profile.csv'
    r = np.linspace(1e-6, 10.0, 37)
    profile = SolutionProfile(abscissae=r, values=np.exp(-r) / 3.0)
    write_profile_csv(profile, path)
    parsed = read_profile_csv(path)
    np.testing.assert_array_equal(parsed.abscissae, profile.abscissae)
    np.testing.assert_array_equal(parsed.values, profile.values)


def test_header_is_checked(tmp_path):
    path = tmp_path / 'profile.csv'
    path.write_text('x,y\n0,1\n1,0\n', encoding='utf-8')
    with pytest.raises(DomainError):
        read_profile_csv(path)


def test_unwritable_path(tmp_path):
    with pytest.raises(OSError):
        write_profile_csv(SolutionProfile(abscissae=[0.0, 1.0], values=[1.0, 0.0]), tmp_path / 'missing' / 'p.csv')
