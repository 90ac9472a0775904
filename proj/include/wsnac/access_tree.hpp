#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wsnac/ecc.hpp"
#include "wsnac/rng.hpp"

namespace wsnac::abe {

using AttributeId = std::string;

// Threshold-gate policy tree. A node with children is a k-of-n gate
// (1 <= threshold <= children); a node without children is a leaf labeled
// with an attribute. Child positions are 1-based among siblings.
struct TreeNode {
    uint32_t threshold = 0;
    AttributeId attribute;
    std::vector<TreeNode> children;

    bool is_leaf() const { return children.empty(); }

    static TreeNode leaf(AttributeId attr) {
        TreeNode n;
        n.attribute = std::move(attr);
        return n;
    }
    static TreeNode gate(uint32_t k, std::vector<TreeNode> kids) {
        TreeNode n;
        n.threshold = k;
        n.children = std::move(kids);
        return n;
    }
};

struct AccessTree {
    TreeNode root;
};

// Nodes are addressed by pre-order index (root = 0); the numbering is the
// stable identifier shared by assignments, leaf keys, and reconstruction.
using NodeId = uint32_t;

// Throws Error(ConfigError) when a gate threshold is out of range or a leaf
// attribute is empty. `universe`, when given, must contain every leaf.
void validate_tree(const AccessTree& tree, const std::set<AttributeId>* universe = nullptr);

size_t count_nodes(const TreeNode& node);
std::map<NodeId, AttributeId> leaf_attributes(const AccessTree& tree);  // id -> attribute

// Per-attribute master secrets t and public points T = t*G.
struct AttributeMaster {
    std::map<AttributeId, ecc::Scalar> secrets;
    std::map<AttributeId, ecc::CurvePoint> points;
};

// Draws one t per attribute, in the order given.
AttributeMaster make_attribute_master(const std::vector<AttributeId>& universe,
                                      const ecc::CurveParams& params, DetRng& rng);

// Coefficient vectors (constant term first) per node. A k-gate gets degree
// k-1; a leaf gets degree 0. The root's constant term is the shared secret;
// every other node's constant term is its parent evaluated at the node's
// 1-based sibling index.
struct PolyAssignment {
    std::map<NodeId, std::vector<ecc::Scalar>> coeffs;

    const ecc::Scalar& constant_term(NodeId id) const { return coeffs.at(id).front(); }
};

PolyAssignment assign_polynomials(const AccessTree& tree, const ecc::Scalar& secret,
                                  const mpz_class& order, DetRng& rng);

ecc::Scalar eval_poly(const std::vector<ecc::Scalar>& coeffs, const mpz_class& x,
                      const mpz_class& order);

// Per-leaf card scalars K = (q_leaf(0) - t_attr) mod n.
struct LeafKeyMap {
    std::map<NodeId, ecc::Scalar> keys;

    bool operator==(const LeafKeyMap&) const = default;
};

// Throws Error(UnknownAttribute) when a leaf's attribute has no master entry.
LeafKeyMap leaf_keys(const AccessTree& tree, const PolyAssignment& assignment,
                     const AttributeMaster& master, const mpz_class& order);

// Lagrange basis coefficient at zero for index i over index set s:
//   prod_{j in s, j != i} (0 - j) / (i - j)  mod order.
// Indices must be distinct and nonzero mod order; i must be in s.
ecc::Scalar lagrange_coeff(const mpz_class& i, const std::vector<mpz_class>& s,
                           const mpz_class& order);

// True iff `attrs` satisfies the tree: a leaf by membership, a gate when at
// least `threshold` children are satisfied.
bool satisfies(const AccessTree& tree, const std::set<AttributeId>& attrs);

// Bottom-up reconstruction over curve points. leaf_inputs maps satisfied
// leaves to their blinded share points; a satisfied gate interpolates the
// lowest-indexed `threshold` satisfied children at zero. Returns nullopt
// when the root is unsatisfied.
std::optional<ecc::CurvePoint> access_reconstruct(
    const AccessTree& tree, const std::map<NodeId, ecc::CurvePoint>& leaf_inputs,
    const std::set<AttributeId>& attrs, const ecc::CurveParams& params);

nlohmann::json tree_to_json(const AccessTree& tree);
AccessTree tree_from_json(const nlohmann::json& j);

}  // namespace wsnac::abe
