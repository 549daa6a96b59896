class ReferralMenuManager {
  approveMenu(menu) {
    return this.menuStore.approve(menu);
  }
  updateMenu(menu) {
    return this.menuStore.update(menu);
  }
}
module.exports = ReferralMenuManager;
