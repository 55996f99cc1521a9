from .forest import RandomForestClassifier, RandomForestRegressor
from .iforest import IsolationForest
from .linear import Lasso, LinearRegression, Ridge
from .logistic import LogisticRegression
from .svm import SVC, SVR
from .tree import DecisionTreeClassifier, DecisionTreeRegressor

__all__ = [
    "DecisionTreeClassifier",
    "DecisionTreeRegressor",
    "RandomForestClassifier",
    "RandomForestRegressor",
    "IsolationForest",
    "LinearRegression",
    "Ridge",
    "Lasso",
    "LogisticRegression",
    "SVC",
    "SVR",
]
