from . import acceptance, constructions
from .algebra import FiniteField, field_create
from .analysis import (Analysis, AnalysisReport, analyze, build_report, compare_expected,
                       exact_value)
from .cache import GroupCache
from .config import Config
from .constructions import ConstructionOutput, ExpectedValue
from .derangement import (ActionProfile, RhoCertificate, RhoValue, UpperBound, certify_rho,
                          find_semiregular_element, intersection_density, is_intersecting,
                          is_semiregular, profile)
from .group_file import GroupFile, read_subset, write_subset
from .output_files import OutputFiles
from .perm import (GroupTable, TransitiveAction, close_group, coset_action, natural_action,
                   set_order_caps)
from .solver import DerangementGraph, SearchResult, Solver
from .spectra import ClassWeighting, Spectra, SpectrumReport, unit_weighting, weighting_from_dict
from .subgroups import PREDICATES, find_subgroup, subgroup_conjugacy_classes
from .suzuki import (SzCase, SzParameters, sz_case_spectrum, sz_case_weighting, sz_group,
                     sz_ovoid_generators, verify_sz_group)

__all__ = [
    "acceptance",
    "constructions",
    "ActionProfile",
    "Analysis",
    "AnalysisReport",
    "ClassWeighting",
    "Config",
    "ConstructionOutput",
    "DerangementGraph",
    "ExpectedValue",
    "FiniteField",
    "GroupCache",
    "GroupFile",
    "GroupTable",
    "OutputFiles",
    "PREDICATES",
    "RhoCertificate",
    "RhoValue",
    "SearchResult",
    "Solver",
    "Spectra",
    "SpectrumReport",
    "SzCase",
    "SzParameters",
    "TransitiveAction",
    "UpperBound",
    "analyze",
    "build_report",
    "certify_rho",
    "close_group",
    "compare_expected",
    "coset_action",
    "exact_value",
    "field_create",
    "find_semiregular_element",
    "find_subgroup",
    "intersection_density",
    "is_intersecting",
    "is_semiregular",
    "natural_action",
    "profile",
    "read_subset",
    "set_order_caps",
    "subgroup_conjugacy_classes",
    "sz_case_spectrum",
    "sz_case_weighting",
    "sz_group",
    "sz_ovoid_generators",
    "unit_weighting",
    "verify_sz_group",
    "weighting_from_dict",
    "write_subset",
]
