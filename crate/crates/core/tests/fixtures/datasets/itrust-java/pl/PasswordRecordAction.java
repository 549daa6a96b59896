public class PasswordRecordAction {
    public void savePassword(Password password) {
        passwordStore.save(password);
    }
    public void updateRecord(Record record) {
        recordStore.update(record);
    }
}
