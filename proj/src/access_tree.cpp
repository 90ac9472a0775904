#include "wsnac/access_tree.hpp"

#include <nlohmann/json.hpp>

#include "wsnac/errors.hpp"

namespace wsnac::abe {

namespace {

// Pre-order walk; fn(node, id). Returns the id following the subtree.
template <typename F>
NodeId walk(const TreeNode& node, NodeId id, F&& fn) {
    fn(node, id);
    NodeId next = id + 1;
    for (const TreeNode& child : node.children) next = walk(child, next, fn);
    return next;
}

}  // namespace

void validate_tree(const AccessTree& tree, const std::set<AttributeId>* universe) {
    walk(tree.root, 0, [&](const TreeNode& node, NodeId) {
        if (node.is_leaf()) {
            if (node.attribute.empty()) {
                throw Error(ErrorCode::ConfigError, "leaf with empty attribute");
            }
            if (universe && !universe->count(node.attribute)) {
                throw Error(ErrorCode::UnknownAttribute, node.attribute);
            }
        } else {
            if (node.threshold < 1 || node.threshold > node.children.size()) {
                throw Error(ErrorCode::ConfigError,
                            "gate threshold " + std::to_string(node.threshold) + " out of range");
            }
        }
    });
}

size_t count_nodes(const TreeNode& node) {
    size_t total = 1;
    for (const TreeNode& child : node.children) total += count_nodes(child);
    return total;
}

std::map<NodeId, AttributeId> leaf_attributes(const AccessTree& tree) {
    std::map<NodeId, AttributeId> out;
    walk(tree.root, 0, [&](const TreeNode& node, NodeId id) {
        if (node.is_leaf()) out[id] = node.attribute;
    });
    return out;
}

AttributeMaster make_attribute_master(const std::vector<AttributeId>& universe,
                                      const ecc::CurveParams& params, DetRng& rng) {
    AttributeMaster master;
    for (const AttributeId& attr : universe) {
        ecc::Scalar t = ecc::random_scalar(rng, params);
        master.points[attr] = ecc::scalar_mul(t, params.g, params);
        master.secrets[attr] = std::move(t);
    }
    return master;
}

ecc::Scalar eval_poly(const std::vector<ecc::Scalar>& coeffs, const mpz_class& x,
                      const mpz_class& order) {
    mpz_class acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = (acc * x + it->v) % order;
    }
    return ecc::reduce(acc, order);
}

namespace {

void assign_node(const TreeNode& node, NodeId& id, const ecc::Scalar& constant,
                 const mpz_class& order, DetRng& rng, PolyAssignment& out) {
    NodeId self = id++;
    std::vector<ecc::Scalar> coeffs{constant};
    size_t degree = node.is_leaf() ? 0 : node.threshold - 1;
    for (size_t i = 0; i < degree; ++i) coeffs.push_back(ecc::Scalar{rng.below(order)});
    out.coeffs[self] = coeffs;
    mpz_class index = 1;  // 1-based sibling position; index 0 would expose the constant term
    for (const TreeNode& child : node.children) {
        assign_node(child, id, eval_poly(coeffs, index, order), order, rng, out);
        ++index;
    }
}

}  // namespace

PolyAssignment assign_polynomials(const AccessTree& tree, const ecc::Scalar& secret,
                                  const mpz_class& order, DetRng& rng) {
    PolyAssignment out;
    NodeId id = 0;
    assign_node(tree.root, id, secret, order, rng, out);
    return out;
}

LeafKeyMap leaf_keys(const AccessTree& tree, const PolyAssignment& assignment,
                     const AttributeMaster& master, const mpz_class& order) {
    LeafKeyMap out;
    for (const auto& [id, attr] : leaf_attributes(tree)) {
        auto it = master.secrets.find(attr);
        if (it == master.secrets.end()) throw Error(ErrorCode::UnknownAttribute, attr);
        out.keys[id] = ecc::reduce(assignment.constant_term(id).v - it->second.v, order);
    }
    return out;
}

ecc::Scalar lagrange_coeff(const mpz_class& i, const std::vector<mpz_class>& s,
                           const mpz_class& order) {
    mpz_class num = 1, den = 1;
    for (const mpz_class& j : s) {
        if (j == i) continue;
        num = ((-j) % order) * num % order;
        den = ((i - j) % order) * den % order;
    }
    return ecc::reduce(num * ecc::mod_inverse(ecc::reduce(den, order).v, order), order);
}

namespace {

bool node_satisfies(const TreeNode& node, const std::set<AttributeId>& attrs) {
    if (node.is_leaf()) return attrs.count(node.attribute) > 0;
    uint32_t hits = 0;
    for (const TreeNode& child : node.children) {
        if (node_satisfies(child, attrs)) ++hits;
    }
    return hits >= node.threshold;
}

std::optional<ecc::CurvePoint> reconstruct_node(
    const TreeNode& node, NodeId id, const std::map<NodeId, ecc::CurvePoint>& leaf_inputs,
    const std::set<AttributeId>& attrs, const ecc::CurveParams& params) {
    if (node.is_leaf()) {
        if (!attrs.count(node.attribute)) return std::nullopt;
        auto it = leaf_inputs.find(id);
        if (it == leaf_inputs.end()) return std::nullopt;
        return it->second;
    }
    // Gather satisfied children with their 1-based indices, lowest first.
    std::vector<std::pair<mpz_class, ecc::CurvePoint>> shares;
    NodeId child_id = id + 1;
    mpz_class index = 1;
    for (const TreeNode& child : node.children) {
        if (shares.size() < node.threshold) {
            auto sub = reconstruct_node(child, child_id, leaf_inputs, attrs, params);
            if (sub) shares.emplace_back(index, *sub);
        }
        child_id += NodeId(count_nodes(child));
        ++index;
    }
    if (shares.size() < node.threshold) return std::nullopt;

    std::vector<mpz_class> index_set;
    index_set.reserve(shares.size());
    for (const auto& [idx, _] : shares) index_set.push_back(idx);

    ecc::CurvePoint acc = ecc::CurvePoint::infinity();
    for (const auto& [idx, point] : shares) {
        ecc::Scalar coeff = lagrange_coeff(idx, index_set, params.n);
        acc = ecc::point_add(acc, ecc::scalar_mul(coeff, point, params), params);
    }
    return acc;
}

}  // namespace

bool satisfies(const AccessTree& tree, const std::set<AttributeId>& attrs) {
    return node_satisfies(tree.root, attrs);
}

std::optional<ecc::CurvePoint> access_reconstruct(
    const AccessTree& tree, const std::map<NodeId, ecc::CurvePoint>& leaf_inputs,
    const std::set<AttributeId>& attrs, const ecc::CurveParams& params) {
    return reconstruct_node(tree.root, 0, leaf_inputs, attrs, params);
}

namespace {

nlohmann::json node_to_json(const TreeNode& node) {
    if (node.is_leaf()) return nlohmann::json{{"attr", node.attribute}};
    nlohmann::json kids = nlohmann::json::array();
    for (const TreeNode& child : node.children) kids.push_back(node_to_json(child));
    return nlohmann::json{{"k", node.threshold}, {"children", std::move(kids)}};
}

TreeNode node_from_json(const nlohmann::json& j) {
    if (j.contains("attr")) return TreeNode::leaf(j.at("attr").get<std::string>());
    if (!j.contains("k") || !j.contains("children")) {
        throw Error(ErrorCode::ConfigError, "tree node needs either attr or k+children");
    }
    std::vector<TreeNode> kids;
    for (const auto& cj : j.at("children")) kids.push_back(node_from_json(cj));
    return TreeNode::gate(j.at("k").get<uint32_t>(), std::move(kids));
}

}  // namespace

nlohmann::json tree_to_json(const AccessTree& tree) { return node_to_json(tree.root); }

AccessTree tree_from_json(const nlohmann::json& j) {
    AccessTree tree{node_from_json(j)};
    validate_tree(tree);
    return tree;
}

}  // namespace wsnac::abe
