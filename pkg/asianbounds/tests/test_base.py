from io import StringIO

import numpy as np
import pytest
from yaml import dump, safe_load
from yamlable import yaml_info

from asianbounds import PricingObject
from asianbounds.base import DomainError, NumericalError, RequestValidationError, ModelConsistencyError, \
    OrderingViolationError, as_float_vector, read_numeric_table


class MemorizingStringIO(StringIO):
    """ A StringIO object that memorizes its buffer when it is closed (as opposed to the standard StringIO) """
    def close(self):
        self.value = self.getvalue()
        StringIO.close(self)


def test_pricing_object_incomplete_description():
    """ Tests that a PricingObject without tag cannot be dumped """

    class Untagged(PricingObject):
        def __init__(self, a=1):
            self.a = a

    with pytest.raises(NotImplementedError) as err_info:
        Untagged().dumps_yaml()

    assert "does not seem to have a non-None '__yaml_tag_suffix__' field" in str(err_info.value)


def test_pricing_object():
    """ Tests that PricingObject dumps and loads through all entry points """

    @yaml_info(yaml_tag_ns='asianbounds.tests')
    class Foo(PricingObject):
        def __init__(self, a, b="hey"):
            self.a = a
            self.b = b

        def __eq__(self, other):
            return vars(self) == vars(other)

    f = Foo(1, 'hello')

    # dump
    y = f.dumps_yaml(default_flow_style=False)
    assert y == """!yamlable/asianbounds.tests.Foo
a: 1
b: hello
"""

    # dump io
    s = MemorizingStringIO()
    f.dump_yaml(s, default_flow_style=False)
    assert s.value == y

    # dump pyyaml
    assert dump(f, default_flow_style=False) == y

    # load, load io, load pyyaml
    assert f == Foo.loads_yaml(y)
    assert f == Foo.load_yaml(StringIO(y))
    assert f == safe_load(y)

    # mapping, sequences and scalar
    assert Foo.loads_yaml("!yamlable/asianbounds.tests.Foo\na: 1\n") == Foo(a=1)
    assert Foo.loads_yaml("!yamlable/asianbounds.tests.Foo\n- 1\n") == Foo(a=1)
    # scalars are not resolved
    assert Foo.loads_yaml("!yamlable/asianbounds.tests.Foo\n1\n") == Foo(a="1")


def test_dump_to_file(tmp_path):
    """ Tests that dump_yaml and load_yaml accept file paths """

    @yaml_info(yaml_tag_ns='asianbounds.tests')
    class Qux(PricingObject):
        def __init__(self, rates):
            self.rates = np.asarray(rates, dtype=float)

    path = str(tmp_path / 'qux.yaml')
    Qux([0.01, 0.02]).dump_yaml(path)
    np.testing.assert_array_equal(Qux.load_yaml(path).rates, [0.01, 0.02])


def test_numpy_values_are_dumped_plain():
    """ Tests that numpy arrays and scalars are written as plain yaml lists and floats """

    @yaml_info('asianbounds.tests.Vec')
    class Vec(PricingObject):
        def __init__(self, values, scale):
            self.values = np.asarray(values, dtype=float)
            self.scale = scale

    y = Vec([1., 2.5], np.float64(3.)).dumps_yaml(default_flow_style=True)
    assert y == "!yamlable/asianbounds.tests.Vec {scale: 3.0, values: [1.0, 2.5]}\n"

    v = Vec.loads_yaml(y)
    np.testing.assert_array_equal(v.values, [1., 2.5])


def test_load_wrong_type():
    """ Tests that load_yaml checks the class of the decoded object """

    @yaml_info(yaml_tag_ns='asianbounds.tests')
    class Bar(PricingObject):
        def __init__(self, a):
            self.a = a

    @yaml_info(yaml_tag_ns='asianbounds.tests')
    class Baz(PricingObject):
        def __init__(self, a):
            self.a = a

    with pytest.raises(TypeError) as err_info:
        Bar.loads_yaml("!yamlable/asianbounds.tests.Baz\na: 1\n")
    assert "Decoded object is not an instance of Bar, but a Baz" in str(err_info.value)

    with pytest.raises(TypeError) as err_info:
        safe_load("!yamlable/asianbounds.tests.Unknown\na: 1\n")
    assert "No YamlAble subclass found able to decode object" in str(err_info.value)


def test_yaml_info_errors():
    """ Tests the @yaml_info argument checks on pricing objects """
    with pytest.raises(ValueError) as err_info:
        yaml_info()(PricingObject)
    assert "One non-None" in str(err_info.value)

    with pytest.raises(ValueError) as err_info:
        yaml_info(yaml_tag='a', yaml_tag_ns='b')(PricingObject)
    assert "Only one of" in str(err_info.value)

    with pytest.raises(ValueError) as err_info:
        @yaml_info(yaml_tag='!foo')
        class Foo(PricingObject):
            pass
    assert "should therefore NOT start with !" in str(err_info.value)

    with pytest.raises(TypeError):
        @yaml_info(yaml_tag='foo')
        class NotPricing(object):
            pass


def test_error_hierarchy():
    """ Tests that package errors can be caught as builtins """
    assert issubclass(DomainError, ValueError)
    assert issubclass(RequestValidationError, DomainError)
    assert issubclass(NumericalError, ArithmeticError)
    assert issubclass(ModelConsistencyError, NumericalError)
    assert issubclass(OrderingViolationError, AssertionError)

    e = RequestValidationError('K', "strike should be > 0, found -1")
    assert e.key == 'K'
    assert str(e) == "Invalid request key 'K': strike should be > 0, found -1"

    assert NumericalError("boom", abscissa=1.5).abscissa == 1.5


def test_read_numeric_table():
    """ Tests the text table reader with comments, commas and blank lines """
    table, comments = read_numeric_table(StringIO(u"# paths=10 seed=3\n0.5, 0.01\n\n1.0  0.02\n"), ncols=2)
    np.testing.assert_array_equal(table, [[0.5, 0.01], [1.0, 0.02]])
    assert comments == ['paths=10 seed=3']


@pytest.mark.parametrize("text, msg", [(u"1 2 3\n", "expected 2 columns, found 3"),
                                       (u"1 abc\n", "non-numeric value"),
                                       (u"# only a comment\n", "is empty")],
                         ids=['columns', 'non-numeric', 'empty'])
def test_read_numeric_table_errors(text, msg):
    """ Tests that malformed tables raise a DomainError """
    with pytest.raises(DomainError) as err_info:
        read_numeric_table(StringIO(text), ncols=2, name='rates')
    assert msg in str(err_info.value)


def test_as_float_vector():
    """ Tests that vectors are read-only and finite """
    v = as_float_vector([1, 2], 'v')
    assert v.dtype == float
    with pytest.raises(ValueError):
        v[0] = 3.

    with pytest.raises(DomainError) as err_info:
        as_float_vector([1, np.nan], 'dates')
    assert "dates contains non-finite values" in str(err_info.value)
