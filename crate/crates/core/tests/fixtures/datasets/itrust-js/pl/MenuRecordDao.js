class MenuRecordDao {
  addMenu(menu) {
    return this.menuStore.add(menu);
  }
  assignRecord(record) {
    return this.recordStore.assign(record);
  }
}
module.exports = MenuRecordDao;
